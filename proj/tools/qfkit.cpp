// qfkit: exact arithmetic for positive definite integral quadratic lattices.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfkit/audit.hpp"
#include "qfkit/json_io.hpp"
#include "qfkit/padic.hpp"
#include "qfkit/represent.hpp"
#include "qfkit/watson.hpp"

namespace {

using qfkit::Int;
using qfkit::json;

constexpr int kExitBadArguments = 64;
constexpr int kExitBadInput = 65;
constexpr int kExitModuleError = 2;

int exit_code_for(const qfkit::error& e) {
  switch (e.code()) {
    case qfkit::errc::not_symmetric:
    case qfkit::errc::not_positive_definite:
    case qfkit::errc::not_integral:
    case qfkit::errc::bad_input:
      return kExitBadInput;
    default:
      return kExitModuleError;
  }
}

void emit(const json& out) { std::cout << out.dump(2) << "\n"; }

json error_json(const qfkit::error& e) {
  json out;
  std::string what = e.what();
  std::string name = qfkit::errc_name(e.code());
  std::string detail = what.size() > name.size() + 2 ? what.substr(name.size() + 2) : what;
  out["error"] = name;
  out["detail"] = detail;
  return out;
}

json witness_json(const qfkit::RepresentationWitness& w) {
  json out;
  bool big = false;
  out["matrix"] = qfkit::encode_imat(w.t, big);
  out["primitive"] = w.primitive;
  if (big) out["bigint"] = true;
  return out;
}

json local_verdict_json(const qfkit::LocalVerdict& v) {
  json out;
  bool big = false;
  out["p"] = qfkit::encode_int(v.p, big);
  out["represented"] = v.represented;
  out["primitively_represented"] = v.primitively_represented;
  out["precision"] = v.precision;
  out["method"] = v.method;
  if (v.witness) {
    out["witness_mod_p_k"] = qfkit::encode_imat(*v.witness, big);
    out["witness_depth"] = v.witness_depth;
  }
  return out;
}

int run_invariants(const std::string& path) {
  qfkit::Lattice l = qfkit::load_lattice(path);
  json out;
  bool big = false;
  out["rank"] = l.rank();
  out["disc"] = qfkit::encode_int(l.disc(), big);
  out["scale"] = qfkit::encode_int(qfkit::scale_ideal(l), big);
  out["norm"] = qfkit::encode_int(qfkit::norm_ideal(l), big);
  out["normalized"] = qfkit::is_normalized(l);
  auto diag = qfkit::diagonalize_space(l);
  json hasse = json::array();
  {
    json h;
    h["place"] = "real";
    h["hasse"] = qfkit::hasse_invariant(diag, qfkit::Place::real());
    hasse.push_back(h);
  }
  std::vector<Int> ps{2};
  for (const auto& q : qfkit::prime_factors(l.disc()))
    if (q != 2) ps.push_back(q);
  std::sort(ps.begin(), ps.end());
  for (const auto& p : ps) {
    json h;
    h["place"] = qfkit::encode_int(p, big);
    h["hasse"] = qfkit::hasse_invariant(diag, qfkit::Place::prime(p));
    h["anisotropic"] = qfkit::is_anisotropic_lattice(l, p);
    json comps = json::array();
    for (const auto& c : qfkit::jordan_decompose(l, p).components) {
      json cj;
      cj["scale"] = c.scale;
      cj["rank"] = c.rank();
      cj["gram"] = qfkit::encode_imat(c.unit_gram, big);
      comps.push_back(cj);
    }
    h["jordan"] = comps;
    hasse.push_back(h);
  }
  out["local"] = hasse;
  if (big) out["bigint"] = true;
  emit(out);
  return 0;
}

int run_minima(const std::string& path) {
  qfkit::Lattice l = qfkit::load_lattice(path);
  auto prof = qfkit::successive_minima(l);
  json out;
  bool big = false;
  json minima = json::array();
  for (const auto& mu : prof.minima) minima.push_back(qfkit::encode_int(mu, big));
  out["minima"] = minima;
  out["witnesses"] = qfkit::encode_imat(prof.witnesses, big);
  if (big) out["bigint"] = true;
  emit(out);
  return 0;
}

int run_jordan(const std::string& path, const Int& p) {
  qfkit::Lattice l = qfkit::load_lattice(path);
  auto js = qfkit::jordan_decompose(l, p);
  json out;
  bool big = false;
  out["p"] = qfkit::encode_int(p, big);
  json comps = json::array();
  for (const auto& c : js.components) {
    json cj;
    cj["scale"] = c.scale;
    cj["rank"] = c.rank();
    cj["gram"] = qfkit::encode_imat(c.unit_gram, big);
    if (p == 2) {
      json kinds = json::array();
      for (auto k : c.blocks)
        kinds.push_back(k == qfkit::BlockKind::unit
                            ? "unit"
                            : (k == qfkit::BlockKind::hyperbolic ? "H" : "A"));
      cj["blocks"] = kinds;
    } else {
      cj["det_square"] = c.det_is_square;
    }
    comps.push_back(cj);
  }
  out["components"] = comps;
  if (big) out["bigint"] = true;
  emit(out);
  return 0;
}

int run_watson(const std::string& path, const Int& p, bool drive, long cap, bool cap_set) {
  qfkit::Lattice l = qfkit::load_lattice(path);
  json out;
  bool big = false;
  out["p"] = qfkit::encode_int(p, big);
  json steps = json::array();
  if (drive) {
    auto res = cap_set ? qfkit::drive_to_full_norm(l, p, cap)
                       : qfkit::drive_to_full_norm(l, p);
    for (const auto& st : res.sequence.steps) {
      json sj;
      sj["r"] = qfkit::rat_to_json(st.r);
      sj["gram"] = qfkit::encode_imat(st.after.gram(), big);
      steps.push_back(sj);
    }
    out["steps"] = steps;
    out["result"] = qfkit::encode_imat(res.result.gram(), big);
    out["norm_image_full"] = true;
    if (res.isotropic_refinement_applicable)
      out["hyperbolic_split"] = res.hyperbolic_split_achieved;
  } else {
    auto [next, st] = qfkit::lambda_normalized(l, p);
    json sj;
    sj["r"] = qfkit::rat_to_json(st.r);
    sj["gram"] = qfkit::encode_imat(next.gram(), big);
    steps.push_back(sj);
    out["steps"] = steps;
    out["result"] = qfkit::encode_imat(next.gram(), big);
  }
  if (big) out["bigint"] = true;
  emit(out);
  return 0;
}

int run_represent(const std::string& ambient_path, const std::string& target_path,
                  bool primitive, const std::string& mode, const Int& p) {
  qfkit::Lattice l = qfkit::load_lattice(ambient_path);
  qfkit::Lattice m = qfkit::load_lattice(target_path);
  json out;
  bool big = false;
  out["primitive_flavor"] = primitive;
  if (mode == "local") {
    auto v = qfkit::local_represents(m, l, p, primitive);
    out["verdict"] = (primitive ? v.primitively_represented : v.represented) ? "Represented"
                                                                             : "NotRepresented";
    out["per_prime"] = json::array({local_verdict_json(v)});
  } else if (mode == "genus") {
    auto g = qfkit::genus_represents(m, l, primitive);
    out["verdict"] = g.represented ? "Represented" : "NotRepresented";
    json pp = json::array();
    for (const auto& v : g.per_prime) pp.push_back(local_verdict_json(v));
    out["per_prime"] = pp;
    out["real_place"] = g.real_place_ok;
  } else {  // global
    auto r = qfkit::global_represents(m, l, primitive);
    switch (r.kind) {
      case qfkit::GlobalResult::Kind::found:
        out["verdict"] = "Represented";
        out["witness"] = witness_json(*r.witness);
        break;
      case qfkit::GlobalResult::Kind::not_found:
        out["verdict"] = "NotFound";
        break;
      case qfkit::GlobalResult::Kind::exhausted:
        out["verdict"] = "Exhausted";
        break;
    }
    out["nodes"] = r.nodes;
  }
  if (big) out["bigint"] = true;
  emit(out);
  return 0;
}

int run_audit(const std::string& path, std::size_t n, const Int& bound, bool strict) {
  qfkit::Lattice l = qfkit::load_lattice(path);
  auto rep = qfkit::audit_regularity(l, n, bound, strict);
  json out;
  bool big = false;
  out["n"] = n;
  out["bound"] = qfkit::encode_int(bound, big);
  out["strict"] = strict;
  switch (rep.verdict) {
    case qfkit::AuditReport::Verdict::verified_up_to_bound:
      out["verdict"] = "VerifiedUpToBound";
      break;
    case qfkit::AuditReport::Verdict::counterexample:
      out["verdict"] = "Counterexample";
      break;
    case qfkit::AuditReport::Verdict::inconclusive:
      out["verdict"] = "Inconclusive";
      break;
  }
  if (rep.counterexample) {
    json ce;
    ce["gram"] = qfkit::encode_imat(rep.counterexample->candidate.gram(), big);
    json pp = json::array();
    for (const auto& v : rep.counterexample->genus.per_prime)
      pp.push_back(local_verdict_json(v));
    ce["per_prime"] = pp;
    ce["search_nodes"] = rep.counterexample->search_nodes;
    out["counterexample"] = ce;
  }
  json stats;
  stats["enumerated"] = rep.enumerated;
  stats["deduplicated"] = rep.deduplicated;
  stats["genus_pass"] = rep.genus_pass;
  stats["tested"] = rep.tested;
  stats["inconclusive"] = rep.inconclusive;
  out["stats"] = stats;
  if (big) out["bigint"] = true;
  emit(out);
  switch (rep.verdict) {
    case qfkit::AuditReport::Verdict::verified_up_to_bound:
      return 0;
    case qfkit::AuditReport::Verdict::counterexample:
      return 1;
    case qfkit::AuditReport::Verdict::inconclusive:
      return 2;
  }
  return 2;
}

int run_charprimes(const std::string& path) {
  qfkit::Lattice l = qfkit::load_lattice(path);
  require(l.rank() == 5, qfkit::errc::bad_input, "charprimes needs a quinary lattice");
  auto cp = qfkit::characteristic_primes(qfkit::diagonalize_space(l));
  json out;
  bool big = false;
  json primes = json::array();
  for (const auto& q : cp.primes) primes.push_back(qfkit::encode_int(q, big));
  out["primes"] = primes;
  json sub = json::array();
  for (const auto& a : cp.square_disc_subspace) sub.push_back(qfkit::rat_to_json(a));
  out["square_disc_subspace"] = sub;
  if (big) out["bigint"] = true;
  emit(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic for positive definite integral quadratic lattices"};
  app.require_subcommand(1);
  long seed = 0;
  app.add_option("--seed", seed, "accepted and ignored; all operations are deterministic");

  std::string path, ambient, target;
  long p_arg = 0;
  bool drive = false, strict = false, primitive = false;
  long cap = 0;
  std::size_t arity = 1;
  std::string bound_str = "1";
  bool genus_mode = false, global_mode = false;
  long local_p = 0;

  auto* inv = app.add_subcommand("invariants", "discriminant, scale, norm, local data");
  inv->add_option("lattice", path)->required();

  auto* mini = app.add_subcommand("minima", "successive minima and witnesses");
  mini->add_option("lattice", path)->required();

  auto* jor = app.add_subcommand("jordan", "p-adic Jordan splitting");
  jor->add_option("-p", p_arg, "prime")->required();
  jor->add_option("lattice", path)->required();

  auto* wat = app.add_subcommand("watson", "normalized Watson steps");
  wat->add_option("-p", p_arg, "prime")->required();
  wat->add_flag("--drive", drive, "iterate until Q(L_p) = 2Z_p");
  auto* cap_opt = wat->add_option("--cap", cap, "step cap for --drive");
  wat->add_option("lattice", path)->required();

  auto* rep = app.add_subcommand("represent", "representation testing");
  rep->add_option("--ambient", ambient)->required();
  rep->add_option("--target", target)->required();
  rep->add_flag("--primitive", primitive);
  auto* local_opt = rep->add_option("--local", local_p, "test at one prime");
  rep->add_flag("--genus", genus_mode);
  rep->add_flag("--global", global_mode);

  auto* aud = app.add_subcommand("audit", "(strict) n-regularity audit");
  aud->add_option("--n", arity)->required();
  aud->add_option("--bound", bound_str)->required();
  aud->add_flag("--strict", strict);
  aud->add_option("lattice", path)->required();

  auto* chp = app.add_subcommand("charprimes", "characteristic primes of a quinary lattice");
  chp->add_option("lattice", path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "{\"error\": \"BadArguments\", \"detail\": \"" << e.what() << "\"}\n";
    return kExitBadArguments;
  }

  try {
    if (*inv) return run_invariants(path);
    if (*mini) return run_minima(path);
    if (*jor) {
      qfkit::require(qfkit::is_prime(Int(p_arg)), qfkit::errc::bad_input, "-p must be prime");
      return run_jordan(path, Int(p_arg));
    }
    if (*wat) {
      qfkit::require(qfkit::is_prime(Int(p_arg)), qfkit::errc::bad_input, "-p must be prime");
      return run_watson(path, Int(p_arg), drive, cap, cap_opt->count() > 0);
    }
    if (*rep) {
      int modes = (local_opt->count() > 0) + genus_mode + global_mode;
      if (modes != 1) {
        std::cerr << "{\"error\": \"BadArguments\", \"detail\": \"choose exactly one of "
                     "--local, --genus, --global\"}\n";
        return kExitBadArguments;
      }
      std::string mode = local_opt->count() ? "local" : (genus_mode ? "genus" : "global");
      if (mode == "local")
        qfkit::require(qfkit::is_prime(Int(local_p)), qfkit::errc::bad_input,
                       "--local takes a prime");
      return run_represent(ambient, target, primitive, mode, Int(local_p));
    }
    if (*aud) return run_audit(path, arity, Int(bound_str), strict);
    if (*chp) return run_charprimes(path);
  } catch (const qfkit::error& e) {
    std::cerr << error_json(e).dump() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": \"Internal\", \"detail\": \"" << e.what() << "\"}\n";
    return kExitModuleError;
  }
  return kExitBadArguments;
}
