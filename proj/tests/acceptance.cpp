// Acceptance gate: one line per criterion, exit code = number of failures.
// Every computation below runs in exact rational or gaussian-rational
// arithmetic; nothing is compared against a tolerance.

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "purespin/gcs.hpp"
#include "purespin/scenario.hpp"
#include "purespin/serialize.hpp"
#include "support/dirac_support.hpp"
#include "support/random_support.hpp"

using namespace purespin;
using testsupport::Rng;

namespace {

int failures = 0;

void report(int num, const std::string& label, bool ok, const std::string& detail = "") {
  std::cout << "criterion " << num << " (" << label << "): " << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " -- " << detail;
  std::cout << "\n";
  if (!ok) ++failures;
}

// ---- 1: dictionary round-trip --------------------------------------------

void criterion1(Rng& rng) {
  auto start = std::chrono::steady_clock::now();
  long long bad = 0, total = 0;
  for (int n = 2; n <= 5; ++n)
    for (int t = 0; t < 1000; ++t, ++total) {
      if (t % 2 == 0) {
        auto l = rng.lagrangian<Rational>(n);
        if (!(annihilator(spinor_of(l)) == l)) ++bad;
      } else {
        auto l = rng.lagrangian<Gaussian>(n);
        if (!(annihilator(spinor_of(l)) == l)) ++bad;
      }
    }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << total << " trials, " << bad << " mismatches, " << secs << " s";
  report(1, "dictionary round-trip", bad == 0 && secs < 30.0, d.str());
}

// ---- 2: transversality biconditional -------------------------------------

void criterion2(Rng& rng) {
  long long bad = 0, total = 0, met = 0;
  for (int n = 2; n <= 5; ++n) {
    int done = 0;
    while (done < 1000) {
      auto d = testsupport::random_datum<Rational>(rng, n, rng.uniform(0, 1) == 1);
      auto k = build_K(d);
      Subspace<Rational> l;
      if (rng.uniform(0, 1) == 1) {
        // force the intersection against the splitting-corrected kernel
        auto keff = d.B.is_zero() ? k : tau_B(d.B, k);
        auto ll = testsupport::nontransversal_lagrangian<Rational>(rng, keff);
        if (!ll) continue;
        l = *ll;
      } else {
        l = rng.lagrangian<Rational>(n);
      }
      auto phi = spinor_of(l);
      auto none = std::optional<Subspace<Rational>>(Subspace<Rational>::zero(l.ambient));
      auto out = reduce_spinor(phi, d, none);
      if (out.intersection_rank > 0) ++met;
      bool ok = out.nonzero == (out.intersection_rank == 0);
      auto rep = check_transversality_theorem(phi, d);
      ok = ok && rep.biconditional_holds && rep.routes_agree &&
           rep.intersection_rank == out.intersection_rank;
      if (!ok) ++bad;
      ++done;
      ++total;
    }
  }
  std::ostringstream d;
  d << total << " pairs (" << met << " non-transversal), " << bad << " violations";
  report(2, "push-forward vanishes iff the intersection is nonzero", bad == 0, d.str());
}

// ---- 3: perturbation suite -----------------------------------------------

void criterion3(Rng& rng) {
  long long bad = 0;
  int done = 0;
  while (done < 500) {
    int m = rng.uniform(2, 5);
    auto d = testsupport::random_datum<Rational>(rng, m, false);
    auto k = build_K(d);
    auto ll = testsupport::nontransversal_lagrangian<Rational>(rng, k);
    if (!ll) continue;
    auto l = *ll;
    auto dsub = perturbation_input(l, k);
    auto ld = perturb(l, dsub, k);
    bool ok = is_lagrangian(ld) && intersect(ld, k).dim() == 0 &&
              sum(intersect(ld, perp(k)), k) == sum(intersect(l, perp(k)), k) &&
              reduce(ld, d) == reduce(l, d);
    auto phi_d = perturb_spinor(spinor_of(l), dsub);
    ok = ok && !phi_d.is_zero() && annihilator(phi_d) == ld;
    if (!ok) ++bad;
    ++done;
  }
  std::ostringstream d;
  d << done << " non-transversal instances, " << bad << " violations";
  report(3, "perturbation restores transversality without moving the reduction", bad == 0,
         d.str());
}

// ---- 4: splitting-change covariance --------------------------------------

void criterion4(Rng& rng) {
  long long bad = 0;
  int done = 0;
  while (done < 200) {
    int m = rng.uniform(3, 5);
    auto d1 = testsupport::random_datum<Rational>(rng, m, true);
    if (d1.t() - d1.r() < 2) continue;
    auto g = fiber_geometry(d1);
    auto btil = rng.homogeneous<Rational>(BasedSpace(d1.t() - d1.r(), true), 2);
    if (btil.is_zero()) continue;

    auto l = rng.lagrangian<Rational>(m);
    auto phi = spinor_of(l);
    auto none = std::optional<Subspace<Rational>>(Subspace<Rational>::zero(l.ambient));
    auto out1 = reduce_spinor(phi, d1, none);
    if (!out1.nonzero) continue;

    // lift through the quotient map: the difference is basic, so it fixes K
    auto d2 = d1;
    d2.B = d1.B + push_linear(Matrix<Rational>(g.qmap.transpose()), btil);
    auto out2 = reduce_spinor(phi, d2, none);
    bool ok = out2.nonzero && out2.intersection_rank == out1.intersection_rank &&
              out2.form == wedge(exp_two_form(btil), out1.form);
    if (!ok) ++bad;
    ++done;
  }
  std::ostringstream d;
  d << done << " pairs, " << bad << " violations";
  report(4, "basic splitting changes wedge the reduced spinor by the induced two-form",
         bad == 0, d.str());
}

// ---- 5: worked examples --------------------------------------------------

void criterion5() {
  RunOptions opt;
  bool ok = true;
  std::string first_fail;
  for (const char* name : {"foliation-restrict", "foliation-nontransversal", "cp1",
                           "nitta-toy", "symplectic-cy"}) {
    auto rep = run_scenario(builtin_scenario(name), opt);
    bool this_ok = rep.ok();
    if (std::string(name) == "symplectic-cy")
      this_ok = this_ok && rep.values.at("points_checked").get<int>() >= 10;
    if (!this_ok && first_fail.empty()) first_fail = name;
    ok = ok && this_ok;
  }
  report(5, "worked examples reproduce the expected reductions", ok,
         ok ? "5 scenarios" : "first failure: " + first_fail);
}

// ---- 6: T-duality normalization and intertwining -------------------------

void criterion6() {
  using PF = PolyForm<Rational>;
  using PR = Poly<Rational>;
  const int n = 5;
  auto x = [](int i) { return PR::variable(n, i); };
  auto a1 = PF::term(n, {2}, x(1));
  auto a2 = PF::term(n, {3}, x(2));
  auto h = PF::term(n, {1, 2, 3}, x(1) * x(1));
  auto theta1 = a1 + PF::term(n, {4}, Rational(1));
  auto h1 = wedge(d(a2), theta1) + h;

  // reduced-chart data: t2 becomes the last coordinate of the 4-chart
  auto x4 = [](int i) { return Poly<Rational>::variable(4, i); };
  auto theta2r = PF::term(4, {4}, Rational(1)) + PF::term(4, {3}, x4(2));
  auto h2 = wedge(PF::term(4, {1, 2}, Rational(1)), theta2r) +
            PF::term(4, {1, 2, 3}, x4(1) * x4(1));

  std::vector<PF> gens = {PF::one(n),
                          theta1,
                          PF::term(n, {1}, x(3)),
                          PF::term(n, {2}, x(1) * x(3)),
                          PF::term(n, {3, 4}, x(2)),
                          PF::term(n, {1, 4}, x(1) * x(1)),
                          PF::term(n, {1, 2, 3}, x(2))};

  auto pure_form = PF::term(n, {1, 2}, PR::constant(n, Rational(1)) + x(1)) +
                   PF::term(n, {1, 4}, Rational(1));
  std::vector<Vector<Rational>> points;
  const long long pts[10][5] = {{0, 0, 0, 0, 0},  {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0},
                                {0, 0, 1, 0, 0},  {1, 1, 1, 0, 0}, {2, -1, 3, 0, 0},
                                {1, 2, -1, 5, 7}, {0, 3, 2, 1, 1}, {-1, -2, 4, 0, 3},
                                {2, 2, 2, 1, -1}};
  for (auto& p : pts) {
    Vector<Rational> v = zero_vector<Rational>(5);
    for (int c = 0; c < 5; ++c) v(c) = Rational(p[c]);
    points.push_back(v);
  }

  bool some_orientation_ok = false;
  std::string detail;
  for (bool flip : {false, true}) {
    auto tau = [&](const PF& f) { return tduality_map(f, a1, a2, flip); };
    bool one_ok = tau(PF::one(n)) == theta2r;
    bool theta_ok = tau(theta1) == PF::one(4);
    bool twine = true;
    for (auto& g : gens)
      if (tau(d_H(g, h1)) != d_H(tau(g), h2)) twine = false;
    bool purity = true;
    auto down = tau(pure_form);
    for (auto& p : points) {
      Vector<Rational> pr = zero_vector<Rational>(4);
      pr.head(3) = p.head(3);
      pr(3) = p(4);
      auto up = pure_form.eval(p);
      auto dn = down.eval(pr);
      if (up.is_zero() || dn.is_zero() || !is_pure(up) || !is_pure(dn)) purity = false;
    }
    if (one_ok && theta_ok && twine && purity) some_orientation_ok = true;
    std::ostringstream o;
    o << (flip ? "; flipped: " : "default: ") << "tau(1)=theta2 " << (one_ok ? "ok" : "NO")
      << ", tau(theta1)=1 " << (theta_ok ? "ok" : "NO") << ", intertwines "
      << (twine ? "ok" : "NO") << ", purity " << (purity ? "ok" : "NO");
    detail += o.str();
  }
  if (!some_orientation_ok)
    detail +=
        "; the two normalizations are jointly unreachable: any extraction that "
        "intertwines the twisted differentials exactly maps 1 and theta1 to "
        "theta2 and -1 up to one overall sign, so tau(1)=theta2 and tau(theta1)=1 "
        "cannot hold under the same orientation";
  report(6, "T-duality normalization with exact intertwining", some_orientation_ok, detail);
}

// ---- 7: choice independence ----------------------------------------------

void criterion7(Rng& rng) {
  long long bad_h = 0, bad_d = 0, bad_c = 0;
  int done_h = 0, done_d = 0, done_c = 0;

  // (a) horizontal-complement choice
  while (done_h < 200) {
    int m = rng.uniform(2, 5);
    auto d = testsupport::random_datum<Rational>(rng, m, rng.uniform(0, 1) == 1);
    auto l = rng.lagrangian<Rational>(m);
    int nr = d.t() - d.r();
    Matrix<Rational> hor = zero_matrix<Rational>(nr, m);
    Matrix<Rational> stacked = zero_matrix<Rational>(d.t(), m);
    stacked.topRows(d.r()) = d.vertical.rows;
    bool found = false;
    for (int attempt = 0; attempt < 20 && !found; ++attempt) {
      hor = rng.matrix<Rational>(nr, d.t()) * d.tangentN.rows;
      stacked.bottomRows(nr) = hor;
      found = rank(stacked) == d.t();
    }
    if (!found) continue;
    auto opt_h = std::optional<Matrix<Rational>>(hor);
    bool ok = reduce(l, d, opt_h) == reduce(l, d);
    auto phi = spinor_of(l);
    auto out = reduce_spinor(phi, d);
    auto out_h =
        reduce_spinor(phi, d, std::optional<Subspace<Rational>>(std::nullopt), opt_h);
    ok = ok && out.nonzero == out_h.nonzero &&
         (!out.nonzero || detail::proportional_nonzero(out_h.form, out.form));
    if (!ok) ++bad_h;
    ++done_h;
  }

  // (b) perturbation-input choice: reduced spinors differ by det of the
  // projection expressing the second input over the first
  while (done_d < 200) {
    int m = rng.uniform(2, 4);
    auto d = testsupport::random_datum<Rational>(rng, m, false);
    auto k = build_K(d);
    auto ll = testsupport::nontransversal_lagrangian<Rational>(rng, k);
    if (!ll) continue;
    auto l = *ll;
    auto kl = intersect(l, k);
    auto d1 = perturbation_input(l, k);
    const int ld = d1.dim();
    auto pk = perp(kl);

    std::optional<Subspace<Rational>> d2;
    for (int attempt = 0; attempt < 30 && !d2; ++attempt) {
      Matrix<Rational> cand =
          d1.rows + rng.matrix<Rational>(ld, kl.dim(), 2) * kl.rows;
      auto s = Subspace<Rational>::span(l.ambient, cand);
      if (s.dim() == ld && is_isotropic(s) && sum(pk, s).dim() == l.ambient.dim())
        d2 = s;
    }
    if (!d2) continue;

    auto phi = spinor_of(l);
    auto out1 = reduce_spinor(phi, d, std::optional<Subspace<Rational>>(d1));
    auto out2 = reduce_spinor(phi, d, d2);

    // express the echelon basis of D2 over D1 along (L∩K)-perp
    Matrix<Rational> frame = zero_matrix<Rational>(l.ambient.dim(), l.ambient.dim());
    frame.topRows(pk.dim()) = pk.rows;
    frame.bottomRows(ld) = d1.rows;
    Matrix<Rational> c = zero_matrix<Rational>(ld, ld);
    bool solved = true;
    for (int i = 0; i < ld && solved; ++i) {
      auto z = solve(Matrix<Rational>(frame.transpose()),
                     Vector<Rational>(d2->rows.row(i).transpose()));
      if (!z) solved = false;
      else c.row(i) = z->tail(ld).transpose();
    }
    bool ok = solved && out1.nonzero && out2.nonzero &&
              out2.form == out1.form * determinant(c);
    if (!ok) ++bad_d;
    ++done_d;
  }

  // (c) delta rescaling
  while (done_c < 200) {
    int m = rng.uniform(2, 5);
    auto d = testsupport::random_datum<Rational>(rng, m, rng.uniform(0, 1) == 1);
    auto phi = spinor_of(rng.lagrangian<Rational>(m));
    auto out = reduce_spinor(phi, d);
    if (!out.nonzero) continue;
    auto c = rng.nonzero_rational();
    auto dc = d;
    dc.delta = d.delta * c;
    auto outc = reduce_spinor(phi, dc);
    if (!(outc.form == out.form * c)) ++bad_c;
    ++done_c;
  }

  std::ostringstream d;
  d << "horizontal " << bad_h << ", perturbation-input " << bad_d << ", delta-rescale "
    << bad_c << " violations over 200 trials each";
  report(7, "reductions are independent of the documented choices",
         bad_h == 0 && bad_d == 0 && bad_c == 0, d.str());
}

// ---- 8: exactness guard --------------------------------------------------

void criterion8() {
  bool ok = true;
  ok = ok && std::string(scalar_traits<Rational>::mode_name) == "exact-rational";
  ok = ok && std::string(scalar_traits<Gaussian>::mode_name) == "gaussian-rational";
  auto threw = [](auto&& fn) {
    try {
      fn();
      return false;
    } catch (const ParseError&) {
      return true;
    }
  };
  ok = ok && threw([] { require_exact_mode("float64", "x"); });
  ok = ok && threw([] { scalar_from_json<Rational>(nlohmann::json(0.5), "x"); });
  ok = ok && threw([] {
    RunOptions opt;
    run_scenario({{"id", "f"}, {"kind", "spinor"}, {"scalar_mode", "float64"},
                  {"payload", nlohmann::json::object()}},
                 opt);
  });
  report(8, "non-exact scalar modes and literals are rejected", ok);
}

}  // namespace

int main() {
  Rng rng(2026);
  criterion1(rng);
  criterion2(rng);
  criterion3(rng);
  criterion4(rng);
  criterion5();
  criterion6();
  criterion7(rng);
  criterion8();
  return failures;
}
