#include "purespin/scenario.hpp"

#include <chrono>
#include <optional>
#include <ostream>
#include <set>

#include "purespin/serialize.hpp"
#include "support/dirac_support.hpp"
#include "support/random_support.hpp"

namespace purespin {
namespace {

using nlohmann::json;
using testsupport::Rng;

// Collects checks and tracks which expectation keys were recognized so that a
// typo in a scenario file fails loudly instead of silently passing.
struct Ctx {
  Report rep;
  const json& expect;
  std::set<std::string> seen;
  bool advisory = false;

  explicit Ctx(const json& e) : expect(e) {}

  void check(const std::string& name, bool ok) { rep.checks[name] = ok; }

  bool want(const std::string& key) {
    seen.insert(key);
    return expect.contains(key);
  }
  const json& at(const std::string& key) { return expect.at(key); }

  void finish() {
    for (auto& [key, val] : expect.items())
      if (!seen.count(key))
        throw ParseError("expectations: unknown key '" + key + "'");
    bool all = true;
    for (auto& [name, ok] : rep.checks.items())
      if (!ok.get<bool>()) all = false;
    rep.status = all ? (advisory ? "flagged" : "pass") : "fail";
  }
};

void expect_bool(Ctx& ctx, const std::string& key, bool got) {
  if (ctx.want(key)) ctx.check("expect_" + key, ctx.at(key).get<bool>() == got);
}

void expect_int(Ctx& ctx, const std::string& key, int got) {
  if (ctx.want(key)) ctx.check("expect_" + key, ctx.at(key).get<int>() == got);
}

template <typename S>
void expect_subspace(Ctx& ctx, const std::string& key, const Subspace<S>& got) {
  if (ctx.want(key))
    ctx.check("expect_" + key,
              subspace_from_json<S>(ctx.at(key), "expectations." + key) == got);
}

template <typename S>
void expect_multielement(Ctx& ctx, const std::string& key, const MultiElement<S>& got) {
  if (ctx.want(key))
    ctx.check("expect_" + key,
              multielement_from_json<S>(ctx.at(key), "expectations." + key) == got);
}

template <typename S>
void expect_polyform(Ctx& ctx, const std::string& key, const PolyForm<S>& got) {
  if (ctx.want(key))
    ctx.check("expect_" + key,
              polyform_from_json<S>(ctx.at(key), "expectations." + key) == got);
}

// ---- kind: reduce -----------------------------------------------------------

template <typename S>
void run_reduce(const json& payload, Ctx& ctx) {
  auto d = datum_from_json<S>(payload.at("datum"), "payload.datum");
  auto k = build_K(d);

  std::optional<Subspace<S>> l;
  if (payload.contains("l")) l = subspace_from_json<S>(payload["l"], "payload.l");
  std::optional<MultiElement<S>> phi;
  if (payload.contains("spinor"))
    phi = multielement_from_json<S>(payload["spinor"], "payload.spinor");
  if (!l && !phi) throw ParseError("payload: reduce needs 'l' or 'spinor'");
  std::optional<Subspace<S>> dsub;
  if (payload.contains("d"))
    dsub = subspace_from_json<S>(payload["d"], "payload.d");
  std::optional<Matrix<S>> horizontal;
  if (payload.contains("horizontal"))
    horizontal = matrix_from_json<S>(payload["horizontal"], "payload.horizontal", d.m);

  if (phi) {
    auto lphi = annihilator(d.B.is_zero() ? *phi : wedge(exp_two_form(d.B), *phi));
    if (lphi.dim() != d.m) throw ParseError("payload.spinor: not a pure spinor");
    if (l)
      ctx.check("spinor_matches_l", annihilator(*phi) == *l);
    else
      l = annihilator(*phi);
  }

  int rank0 = intersect(d.B.is_zero() ? *l : tau_B(-d.B, *l), k).dim();
  ctx.rep.values["intersection_rank"] = rank0;
  if (rank0 > 0) ctx.advisory = true;

  auto l_red = reduce(*l, d, horizontal);
  ctx.rep.values["l_red"] = subspace_to_json(l_red);

  if (phi) {
    auto out = reduce_spinor(*phi, d, dsub, horizontal);
    ctx.rep.values["form"] = multielement_to_json(out.form);
    ctx.rep.values["nonzero"] = out.nonzero;
    ctx.rep.values["transversal"] = out.transversal;
    if (out.nonzero)
      ctx.check("form_annihilator_matches_l_red", annihilator(out.form) == l_red);
    expect_multielement<S>(ctx, "form", out.form);
    if (ctx.want("form_proportional"))
      ctx.check("expect_form_proportional",
                detail::proportional_nonzero(
                    multielement_from_json<S>(ctx.at("form_proportional"),
                                              "expectations.form_proportional"),
                    out.form));
    expect_bool(ctx, "nonzero", out.nonzero);
    expect_bool(ctx, "transversal", out.transversal);
  }
  expect_subspace<S>(ctx, "l_red", l_red);
  expect_int(ctx, "intersection_rank", rank0);
}

// ---- kind: spinor -----------------------------------------------------------

template <typename S>
void run_spinor(const json& payload, Ctx& ctx) {
  if (payload.contains("l")) {
    auto l = subspace_from_json<S>(payload["l"], "payload.l");
    auto form = spinor_of(l);
    ctx.rep.values["form"] = multielement_to_json(form);
    ctx.check("pure", is_pure(form));
    ctx.check("round_trip", annihilator(form) == l);
    expect_multielement<S>(ctx, "form", form);
    if (ctx.want("form_proportional"))
      ctx.check("expect_form_proportional",
                detail::proportional_nonzero(
                    multielement_from_json<S>(ctx.at("form_proportional"),
                                              "expectations.form_proportional"),
                    form));
  } else if (payload.contains("phi")) {
    auto phi = multielement_from_json<S>(payload["phi"], "payload.phi");
    auto ann = annihilator(phi);
    ctx.rep.values["annihilator"] = subspace_to_json(ann);
    ctx.rep.values["pure"] = is_pure(phi);
    expect_bool(ctx, "pure", is_pure(phi));
    expect_subspace<S>(ctx, "annihilator", ann);
  } else {
    throw ParseError("payload: spinor needs 'l' or 'phi'");
  }
}

// ---- kind: gcs-check --------------------------------------------------------
// Structure data is rational; spinor-level values live over the gaussian
// rationals regardless of the declared mode.

void run_gcs_check(const json& payload, Ctx& ctx) {
  auto gc = gcs_from_json(payload.at("gcs"), "payload.gcs");
  auto l = eigenbundle(gc);
  ctx.rep.values["eigenbundle"] = subspace_to_json(l);
  ctx.check("eigenbundle_generalized_complex", is_generalized_complex(l));
  expect_subspace<Gaussian>(ctx, "eigenbundle", l);

  if (payload.contains("datum")) {
    auto d = datum_from_json<Rational>(payload["datum"], "payload.datum");
    auto k = build_K(d);
    auto comp = reduction_compatible(gc, k);
    ctx.rep.values["compatible"] = comp.compatible;
    ctx.rep.values["strong"] = comp.strong;
    ctx.rep.values["l_cap_kc_rank"] = comp.l_cap_kc_rank;
    ctx.rep.values["lred_conj_rank"] = comp.lred_conj_rank;
    ctx.rep.values["jk_cap_kperp"] = subspace_to_json(comp.jk_cap_kperp);
    if (!comp.strong) ctx.advisory = true;
    expect_bool(ctx, "compatible", comp.compatible);
    expect_bool(ctx, "strong", comp.strong);
    expect_int(ctx, "l_cap_kc_rank", comp.l_cap_kc_rank);
    expect_int(ctx, "lred_conj_rank", comp.lred_conj_rank);

    if (payload.contains("dmu")) {
      const json& jd = payload["dmu"];
      if (!jd.is_array()) throw ParseError("payload.dmu: expected an array of covectors");
      std::vector<Vector<Rational>> dmu;
      for (std::size_t i = 0; i < jd.size(); ++i)
        dmu.push_back(vector_from_json<Rational>(
            jd[i], "payload.dmu[" + std::to_string(i) + "]", d.m));
      auto nit = nitta_intersection(gc, d, dmu);
      ctx.rep.values["l_cap_kc"] = subspace_to_json(nit.intersection);
      ctx.rep.values["anchor_iso"] = nit.anchor_iso;
      ctx.check("nitta_matches_bruteforce", nit.matches_bruteforce);
      expect_subspace<Gaussian>(ctx, "l_cap_kc", nit.intersection);
      expect_bool(ctx, "anchor_iso", nit.anchor_iso);
    }

    if (payload.contains("spinor")) {
      auto phi = multielement_from_json<Gaussian>(payload["spinor"], "payload.spinor");
      auto dg = complexify(d);
      auto out = reduce_spinor(phi, dg);
      auto l_red = reduce(annihilator(phi), dg);
      ctx.rep.values["form"] = multielement_to_json(out.form);
      ctx.rep.values["nonzero"] = out.nonzero;
      ctx.rep.values["l_red"] = subspace_to_json(l_red);
      if (out.nonzero)
        ctx.check("form_annihilator_matches_l_red", annihilator(out.form) == l_red);
      expect_multielement<Gaussian>(ctx, "form", out.form);
      expect_bool(ctx, "nonzero", out.nonzero);
      expect_subspace<Gaussian>(ctx, "l_red", l_red);
    }
  }
}

// ---- kind: tduality ---------------------------------------------------------

// base forms on the correspondence chart descend to the reduced chart by
// dropping the two circle coordinates (t1 disappears, t2 becomes the last
// coordinate of the smaller chart)
template <typename S>
PolyForm<S> to_reduced(const PolyForm<S>& f, const std::string& where) {
  const int n = f.n;
  const std::uint32_t bit1 = std::uint32_t(1) << (n - 2);
  const std::uint32_t bit2 = std::uint32_t(1) << (n - 1);
  PolyForm<S> out(n - 1);
  for (auto& [m, p] : f.comp) {
    if (m & (bit1 | bit2)) throw ParseError(where + ": not a base form");
    if (p.degree_in(n - 1) != 0 || p.degree_in(n) != 0)
      throw ParseError(where + ": coefficient depends on a circle coordinate");
    Poly<S> q(n - 1);
    for (auto& [key, c] : p.terms) q.add_term(key, c);
    out.add_mask(m, std::move(q));
  }
  return out;
}

template <typename S>
void run_tduality(const json& payload, Ctx& ctx) {
  auto a1 = polyform_from_json<S>(payload.at("a1"), "payload.a1");
  auto a2 = polyform_from_json<S>(payload.at("a2"), "payload.a2");
  const int n = a1.n;
  if (n < 3) throw ParseError("payload: tduality chart needs dimension >= 3");
  auto h = payload.contains("h") ? polyform_from_json<S>(payload["h"], "payload.h")
                                 : PolyForm<S>::zero(n);
  const bool flip = payload.value("flip_orientation", false);
  auto tau = [&](const PolyForm<S>& f) { return tduality_map(f, a1, a2, flip); };

  auto theta1 = a1 + PolyForm<S>::term(n, {n - 1}, S(1));
  auto h1 = wedge(d(a2), theta1) + h;
  auto theta2r = to_reduced(a2, "payload.a2") + PolyForm<S>::term(n - 1, {n - 1}, S(1));
  auto h2 = wedge(to_reduced(d(a1), "payload.a1"), theta2r) + to_reduced(h, "payload.h");
  require_closed_twist(h1);
  require_closed_twist(h2);

  auto tau_one = tau(PolyForm<S>::one(n));
  auto tau_theta1 = tau(theta1);
  ctx.rep.values["tau_one"] = polyform_to_json(tau_one);
  ctx.rep.values["tau_theta1"] = polyform_to_json(tau_theta1);
  ctx.check("tau_one_is_theta2", tau_one == (flip ? -theta2r : theta2r));
  expect_polyform<S>(ctx, "tau_one", tau_one);
  expect_polyform<S>(ctx, "tau_theta1", tau_theta1);

  std::vector<PolyForm<S>> gens = {PolyForm<S>::one(n), theta1};
  if (payload.contains("generators")) {
    const json& jg = payload["generators"];
    if (!jg.is_array()) throw ParseError("payload.generators: expected an array");
    for (std::size_t i = 0; i < jg.size(); ++i)
      gens.push_back(polyform_from_json<S>(
          jg[i], "payload.generators[" + std::to_string(i) + "]"));
  }
  bool intertwines = true;
  for (auto& g : gens)
    if (tau(d_H(g, h1)) != d_H(tau(g), h2)) intertwines = false;
  ctx.rep.values["generators_checked"] = gens.size();
  ctx.check("intertwines_twisted_differentials", intertwines);

  if (payload.contains("pure_form")) {
    auto pf = polyform_from_json<S>(payload["pure_form"], "payload.pure_form");
    auto pf_down = tau(pf);
    const json& jp = payload.at("points");
    if (!jp.is_array()) throw ParseError("payload.points: expected an array");
    bool purity = true;
    int checked = 0;
    for (std::size_t i = 0; i < jp.size(); ++i) {
      auto x = vector_from_json<S>(jp[i], "payload.points[" + std::to_string(i) + "]", n);
      Vector<S> xr = zero_vector<S>(n - 1);
      xr.head(n - 2) = x.head(n - 2);
      xr(n - 2) = x(n - 1);
      auto up = pf.eval(x);
      auto down = pf_down.eval(xr);
      if (up.is_zero() || down.is_zero() || !is_pure(up) || !is_pure(down)) purity = false;
      ++checked;
    }
    ctx.rep.values["purity_points"] = checked;
    ctx.check("pointwise_purity", purity);
  }
}

// ---- kind: polyform-check ---------------------------------------------------

template <typename S>
void run_polyform_check(const json& payload, Ctx& ctx) {
  auto phi = polyform_from_json<S>(payload.at("phi"), "payload.phi");
  const int n = phi.n;
  auto h = payload.contains("h") ? polyform_from_json<S>(payload["h"], "payload.h")
                                 : PolyForm<S>::zero(n);
  const json& jp = payload.at("points");
  if (!jp.is_array()) throw ParseError("payload.points: expected an array");
  std::vector<Vector<S>> points;
  for (std::size_t i = 0; i < jp.size(); ++i)
    points.push_back(
        vector_from_json<S>(jp[i], "payload.points[" + std::to_string(i) + "]", n));

  bool closed = d_H(phi, h).is_zero();
  ctx.rep.values["d_h_closed"] = closed;
  expect_bool(ctx, "d_h_closed", closed);

  auto chks = spinor_integrability(phi, h, points);
  bool all_nonzero = true, all_pure = true, all_member = true;
  for (auto& c : chks) {
    all_nonzero = all_nonzero && c.nonzero;
    all_pure = all_pure && c.pure;
    all_member = all_member && c.member;
  }
  ctx.rep.values["points_checked"] = chks.size();
  ctx.rep.values["all_nonzero"] = all_nonzero;
  ctx.rep.values["all_pure"] = all_pure;
  ctx.rep.values["all_member"] = all_member;
  expect_bool(ctx, "all_nonzero", all_nonzero);
  expect_bool(ctx, "all_pure", all_pure);
  expect_bool(ctx, "all_member", all_member);

  if (payload.contains("omega")) {
    auto omega = polyform_from_json<S>(payload["omega"], "payload.omega");
    bool gi = graph_integrability(omega, h);
    ctx.rep.values["graph_integrable"] = gi;
    expect_bool(ctx, "graph_integrable", gi);
  }
}

}  // namespace

Report run_scenario(const json& scenario, const RunOptions&) {
  if (!scenario.is_object()) throw ParseError("scenario: expected a JSON object");
  const std::string id = scenario.value("id", std::string("anonymous"));
  if (!scenario.contains("kind"))
    throw ParseError("scenario '" + id + "': missing 'kind'");
  const std::string kind = scenario["kind"].get<std::string>();
  const std::string mode = scenario.value("scalar_mode", std::string("exact-rational"));
  require_exact_mode(mode, "scenario '" + id + "'");
  const bool gaussian = mode == "gaussian-rational";
  const json payload = scenario.value("payload", json::object());
  const json expect = scenario.value("expectations", json::object());

  Ctx ctx(expect);
  ctx.rep.id = id;
  auto start = std::chrono::steady_clock::now();
  if (kind == "reduce") {
    gaussian ? run_reduce<Gaussian>(payload, ctx) : run_reduce<Rational>(payload, ctx);
  } else if (kind == "spinor") {
    gaussian ? run_spinor<Gaussian>(payload, ctx) : run_spinor<Rational>(payload, ctx);
  } else if (kind == "gcs-check") {
    run_gcs_check(payload, ctx);
  } else if (kind == "tduality") {
    gaussian ? run_tduality<Gaussian>(payload, ctx) : run_tduality<Rational>(payload, ctx);
  } else if (kind == "polyform-check") {
    gaussian ? run_polyform_check<Gaussian>(payload, ctx)
             : run_polyform_check<Rational>(payload, ctx);
  } else {
    throw ParseError("scenario '" + id + "': unknown kind '" + kind + "'");
  }
  ctx.finish();
  ctx.rep.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return ctx.rep;
}

Report run_selftest(const RunOptions& opt) {
  Rng rng(opt.seed);
  Report rep;
  rep.id = "selftest";
  rep.values["seed"] = opt.seed;
  rep.values["max_dim"] = opt.max_dim;
  const int nmax = std::min(std::max(opt.max_dim, 2), 8);
  const int nmid = std::min(nmax, 5);
  auto start = std::chrono::steady_clock::now();

  // dictionary round-trip: annihilator(spinor_of(L)) = L
  {
    bool ok = true;
    int trials = 0;
    for (int n = 2; n <= nmax; ++n)
      for (int t = 0; t < 25; ++t, ++trials) {
        if (t % 2 == 0) {
          auto l = rng.lagrangian<Rational>(n);
          ok = ok && annihilator(spinor_of(l)) == l;
        } else {
          auto l = rng.lagrangian<Gaussian>(n);
          ok = ok && annihilator(spinor_of(l)) == l;
        }
      }
    rep.values["dictionary_trials"] = trials;
    rep.checks["dictionary_round_trip"] = ok;
  }

  // transversality biconditional: unperturbed push-forward vanishes exactly on
  // L cap K != 0, both routes agreeing
  {
    bool ok = true;
    int trials = 0;
    while (trials < 40) {
      int m = rng.uniform(2, nmid);
      auto d = testsupport::random_datum<Rational>(rng, m, false);
      auto k = build_K(d);
      Subspace<Rational> l;
      if (rng.uniform(0, 1) == 1) {
        auto ll = testsupport::nontransversal_lagrangian<Rational>(rng, k);
        if (!ll) continue;
        l = *ll;
      } else {
        l = rng.lagrangian<Rational>(m);
      }
      auto t = check_transversality_theorem(spinor_of(l), d);
      ok = ok && t.biconditional_holds && t.routes_agree;
      ++trials;
    }
    rep.values["transversality_trials"] = trials;
    rep.checks["transversality_biconditional"] = ok;
  }

  // perturbation invariance: L_D restores transversality without moving the
  // reduced structure
  {
    bool ok = true;
    int trials = 0;
    while (trials < 20) {
      int m = rng.uniform(2, nmid);
      auto d = testsupport::random_datum<Rational>(rng, m, false);
      auto k = build_K(d);
      auto ll = testsupport::nontransversal_lagrangian<Rational>(rng, k);
      if (!ll) continue;
      auto dsub = perturbation_input(*ll, k);
      auto ld = perturb(*ll, dsub, k);
      ok = ok && is_lagrangian(ld) && intersect(ld, k).dim() == 0 &&
           sum(intersect(ld, perp(k)), k) == sum(intersect(*ll, perp(k)), k) &&
           reduce(ld, d) == reduce(*ll, d);
      ++trials;
    }
    rep.values["perturbation_trials"] = trials;
    rep.checks["perturbation_invariance"] = ok;
  }

  // B-covariance: the splitting change acts as e^{-B} on spinor lines and as
  // tau_B on their annihilators
  {
    bool ok = true;
    for (int t = 0; t < 20; ++t) {
      int n = rng.uniform(2, nmid);
      auto l = rng.lagrangian<Rational>(n);
      auto b = rng.homogeneous<Rational>(BasedSpace(n, true), 2);
      auto phi = spinor_of(l);
      ok = ok && annihilator(wedge(exp_two_form(-b), phi)) == tau_B(b, l);
    }
    rep.values["b_covariance_trials"] = 20;
    rep.checks["b_covariance"] = ok;
  }

  // Fourier-side intertwining of the two push-forward routes on random
  // transversal fibers
  {
    bool ok = true;
    int trials = 0;
    while (trials < 20) {
      int m = rng.uniform(2, nmid);
      auto d = testsupport::random_datum<Rational>(rng, m, false);
      auto l = rng.lagrangian<Rational>(m);
      auto t = check_transversality_theorem(spinor_of(l), d);
      if (t.intersection_rank != 0) continue;
      ok = ok && t.covariant_nonzero && t.contravariant_nonzero && t.routes_agree;
      ++trials;
    }
    rep.values["fourier_trials"] = trials;
    rep.checks["fourier_route_agreement"] = ok;
  }

  bool all = true;
  for (auto& [name, ok] : rep.checks.items())
    if (!ok.get<bool>()) all = false;
  rep.status = all ? "pass" : "fail";
  rep.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return rep;
}

void print_reports(std::ostream& os, const std::vector<Report>& reports, bool json_mode) {
  if (json_mode) {
    json out;
    out["schema"] = "1";
    out["reports"] = json::array();
    for (auto& r : reports)
      out["reports"].push_back(
          {{"id", r.id}, {"status", r.status}, {"checks", r.checks}, {"values", r.values}});
    os << out.dump(2) << "\n";
    return;
  }
  for (auto& r : reports) {
    os << "scenario " << r.id << ": " << r.status << " (" << r.micros << " us)\n";
    for (auto& [name, ok] : r.checks.items())
      os << "  [" << (ok.get<bool>() ? "ok" : "FAIL") << "] " << name << "\n";
  }
}

int exit_code(const std::vector<Report>& reports) {
  for (auto& r : reports)
    if (!r.ok()) return 1;
  return 0;
}

}  // namespace purespin
