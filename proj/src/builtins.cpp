#include "purespin/scenario.hpp"
#include "purespin/serialize.hpp"

namespace purespin {
namespace {

using nlohmann::json;

Matrix<Rational> from_ints(int rows, int cols, std::initializer_list<long long> entries) {
  Matrix<Rational> m = zero_matrix<Rational>(rows, cols);
  auto it = entries.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Rational(*it++);
  return m;
}

Matrix<Rational> j_symplectic(int n) {
  Matrix<Rational> am = zero_matrix<Rational>(n, n);
  for (int i = 0; i < n; i += 2) {
    am(i + 1, i) = Rational(1);
    am(i, i + 1) = Rational(-1);
  }
  Matrix<Rational> j = zero_matrix<Rational>(2 * n, 2 * n);
  j.topRightCorner(n, n) = *inverse(am);
  j.bottomLeftCorner(n, n) = -am;
  return j;
}

Matrix<Rational> j_complex(int n) {
  Matrix<Rational> j0 = zero_matrix<Rational>(n, n);
  for (int i = 0; i < n; i += 2) {
    j0(i + 1, i) = Rational(1);
    j0(i, i + 1) = Rational(-1);
  }
  Matrix<Rational> j = zero_matrix<Rational>(2 * n, 2 * n);
  j.topLeftCorner(n, n) = -j0;
  j.bottomRightCorner(n, n) = j0.transpose();
  return j;
}

// m=4 fiber of a circle action: N-fiber span{e2,e3,e4}, circle direction e2
ReductionDatum<Rational> circle_datum(Vector<Rational> moment) {
  ReductionDatum<Rational> d;
  d.m = 4;
  d.tangentN = Subspace<Rational>::span(
      Ambient::plain(4), from_ints(3, 4, {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}));
  d.vertical = Subspace<Rational>::span(Ambient::plain(4), from_ints(1, 4, {0, 1, 0, 0}));
  d.delta = MultiElement<Rational>::basis(BasedSpace(4, false), 2);
  d.moment_covectors.push_back(std::move(moment));
  d.B = MultiElement<Rational>::zero(BasedSpace(4, true));
  return d;
}

ReductionDatum<Rational> foliation_datum(std::initializer_list<long long> tn_rows) {
  ReductionDatum<Rational> d;
  d.m = 3;
  d.tangentN = Subspace<Rational>::span(Ambient::plain(3), from_ints(2, 3, tn_rows));
  d.vertical = Subspace<Rational>::zero(Ambient::plain(3));
  d.delta = MultiElement<Rational>::one(BasedSpace(3, false));
  d.B = MultiElement<Rational>::zero(BasedSpace(3, true));
  return d;
}

// L = Delta + Ann(Delta) restricted along a transversal leaf chart; transversal
// from the start, so no perturbation is needed.
json foliation_restrict() {
  json s;
  s["id"] = "foliation-restrict";
  s["kind"] = "reduce";
  s["scalar_mode"] = "exact-rational";
  auto d = foliation_datum({1, 0, 0, 0, 0, 1});
  BasedSpace dual(3, true);
  s["payload"] = {
      {"datum", datum_to_json(d)},
      {"l", subspace_to_json(Subspace<Rational>::span(
                Ambient::split(3),
                from_ints(3, 6,
                          {1, 0, 0, 0, 0, 0,
                           0, 1, 0, 0, 0, 0,
                           0, 0, 0, 0, 0, 1})))},
      {"spinor", multielement_to_json(MultiElement<Rational>::basis(dual, 3))},
  };
  s["expectations"] = {
      {"intersection_rank", 0},
      {"nonzero", true},
      {"transversal", true},
      {"form", multielement_to_json(MultiElement<Rational>::basis(BasedSpace(2, true), 2))},
      {"l_red", subspace_to_json(Subspace<Rational>::span(
                    Ambient::split(2), from_ints(2, 4, {1, 0, 0, 0, 0, 0, 0, 1})))},
  };
  return s;
}

// same shape of L, but the leaf fails to be transversal: the run is flagged,
// perturbs, and still lands on the expected reduced line
json foliation_nontransversal() {
  json s;
  s["id"] = "foliation-nontransversal";
  s["kind"] = "reduce";
  s["scalar_mode"] = "exact-rational";
  auto d = foliation_datum({1, 0, 0, 0, 1, 0});
  BasedSpace dual(3, true);
  auto phi = wedge(MultiElement<Rational>::basis(dual, 2),
                   MultiElement<Rational>::basis(dual, 3));
  s["payload"] = {
      {"datum", datum_to_json(d)},
      {"l", subspace_to_json(Subspace<Rational>::span(
                Ambient::split(3),
                from_ints(3, 6,
                          {1, 0, 0, 0, 0, 0,
                           0, 0, 0, 0, 1, 0,
                           0, 0, 0, 0, 0, 1})))},
      {"spinor", multielement_to_json(phi)},
  };
  s["expectations"] = {
      {"intersection_rank", 1},
      {"nonzero", true},
      {"transversal", true},
      {"form",
       multielement_to_json(MultiElement<Rational>::basis(BasedSpace(2, true), 2) *
                            Rational(-1))},
      {"l_red", subspace_to_json(Subspace<Rational>::span(
                    Ambient::split(2), from_ints(2, 4, {1, 0, 0, 0, 0, 0, 0, 1})))},
  };
  return s;
}

// complex C^2 fiber with a circle direction: the reduced line is the standard
// complex structure one fiber dimension down
json cp1() {
  json s;
  s["id"] = "cp1";
  s["kind"] = "gcs-check";
  s["scalar_mode"] = "gaussian-rational";
  Vector<Rational> dx1 = zero_vector<Rational>(4);
  dx1(0) = Rational(1);
  auto d = circle_datum(dx1);

  using MG = MultiElement<Gaussian>;
  const Gaussian i = Gaussian::i();
  BasedSpace dual(4, true);
  auto dz1 = MG::basis(dual, 1) + MG::basis(dual, 2) * i;
  auto dz2 = MG::basis(dual, 3) + MG::basis(dual, 4) * i;

  s["payload"] = {
      {"gcs", gcs_to_json(make_gcs(j_complex(4)))},
      {"datum", datum_to_json(d)},
      {"spinor", multielement_to_json(wedge(dz1, dz2))},
  };
  BasedSpace base(2, true);
  auto dz = MG::basis(base, 1) + MG::basis(base, 2) * i;
  s["expectations"] = {
      {"compatible", true},
      {"strong", true},
      {"l_cap_kc_rank", 0},
      {"lred_conj_rank", 0},
      {"nonzero", true},
      {"form", multielement_to_json(dz * (-i))},
      {"l_red", subspace_to_json(eigenbundle(make_gcs(j_complex(2))))},
  };
  return s;
}

// symplectic fiber whose circle direction maps onto a moment differential:
// L ∩ K_C is the parametrized line (u ; -i dmu)
json nitta_toy() {
  json s;
  s["id"] = "nitta-toy";
  s["kind"] = "gcs-check";
  s["scalar_mode"] = "gaussian-rational";
  auto d = circle_datum(zero_vector<Rational>(4));
  Vector<Rational> dmu = zero_vector<Rational>(4);
  dmu(0) = Rational(1);
  s["payload"] = {
      {"gcs", gcs_to_json(make_gcs(j_symplectic(4)))},
      {"datum", datum_to_json(d)},
      {"dmu", json::array({vector_to_json(dmu)})},
  };
  Matrix<Gaussian> row = zero_matrix<Gaussian>(1, 8);
  row(0, 1) = Gaussian(1);
  row(0, 4) = -Gaussian::i();
  s["expectations"] = {
      {"compatible", true},
      {"strong", false},
      {"l_cap_kc_rank", 1},
      {"lred_conj_rank", 0},
      {"anchor_iso", true},
      {"l_cap_kc", subspace_to_json(Subspace<Gaussian>::span(Ambient::split(4), row))},
  };
  return s;
}

// exp(-i omega) for the standard symplectic form: closed, pure, and integrable
// at every sample point, cross-checked against the graph frame
json symplectic_cy() {
  json s;
  s["id"] = "symplectic-cy";
  s["kind"] = "polyform-check";
  s["scalar_mode"] = "gaussian-rational";
  using PF = PolyForm<Gaussian>;
  auto omega = PF::term(4, {1, 2}, Gaussian(1)) + PF::term(4, {3, 4}, Gaussian(1));
  auto phi = exp_wedge(omega * -Gaussian::i());
  json points = json::array();
  const long long pts[11][4] = {{0, 0, 0, 0}, {1, 0, 0, 0},  {0, 1, 0, 0},  {0, 0, 1, 0},
                                {0, 0, 0, 1}, {1, 1, 0, 0},  {1, 0, 1, 0},  {2, -1, 1, 3},
                                {1, 2, 3, 4}, {-1, 1, -1, 1}, {3, 0, -2, 1}};
  for (auto& p : pts) {
    Vector<Gaussian> x = zero_vector<Gaussian>(4);
    for (int c = 0; c < 4; ++c) x(c) = Gaussian(Rational(p[c]));
    points.push_back(vector_to_json(x));
  }
  s["payload"] = {
      {"phi", polyform_to_json(phi)},
      {"omega", polyform_to_json(omega)},
      {"points", points},
  };
  s["expectations"] = {
      {"d_h_closed", true},  {"all_nonzero", true},      {"all_pure", true},
      {"all_member", true},  {"graph_integrable", true},
  };
  return s;
}

// twisted circle pair on a 3-dimensional base: connection a1 = x1 dx2 with
// dual curvature c2 = d(x2 dx3) and residual twist x1^2 dx1^dx2^dx3
json tduality_basic() {
  json s;
  s["id"] = "tduality-basic";
  s["kind"] = "tduality";
  s["scalar_mode"] = "exact-rational";
  using PF = PolyForm<Rational>;
  using PR = Poly<Rational>;
  auto x = [](int i) { return PR::variable(5, i); };
  auto a1 = PF::term(5, {2}, x(1));
  auto a2 = PF::term(5, {3}, x(2));
  auto h = PF::term(5, {1, 2, 3}, x(1) * x(1));

  json gens = json::array();
  gens.push_back(polyform_to_json(PF::term(5, {1}, x(3))));
  gens.push_back(polyform_to_json(PF::term(5, {2}, x(1) * x(3))));
  gens.push_back(polyform_to_json(PF::term(5, {3, 4}, x(2))));
  gens.push_back(polyform_to_json(PF::term(5, {1, 4}, x(1) * x(1))));
  gens.push_back(polyform_to_json(PF::term(5, {1, 2, 3}, x(2))));

  // dx1 ^ ((1+x1) dx2 + dt1): decomposable, hence pure at every point
  auto pure_form = PF::term(5, {1, 2}, PR::constant(5, Rational(1)) + x(1)) +
                   PF::term(5, {1, 4}, Rational(1));
  json points = json::array();
  const long long pts[10][5] = {{0, 0, 0, 0, 0},  {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0},
                                {0, 0, 1, 0, 0},  {1, 1, 1, 0, 0}, {2, -1, 3, 0, 0},
                                {1, 2, -1, 5, 7}, {0, 3, 2, 1, 1}, {-1, -2, 4, 0, 3},
                                {2, 2, 2, 1, -1}};
  for (auto& p : pts) {
    Vector<Rational> v = zero_vector<Rational>(5);
    for (int c = 0; c < 5; ++c) v(c) = Rational(p[c]);
    points.push_back(vector_to_json(v));
  }
  s["payload"] = {
      {"a1", polyform_to_json(a1)},     {"a2", polyform_to_json(a2)},
      {"h", polyform_to_json(h)},       {"generators", gens},
      {"pure_form", polyform_to_json(pure_form)}, {"points", points},
  };
  using PF4 = PolyForm<Rational>;
  auto theta2r = PF4::term(4, {4}, Rational(1)) + PF4::term(4, {3}, PR::variable(4, 2));
  s["expectations"] = {
      {"tau_one", polyform_to_json(theta2r)},
      {"tau_theta1",
       polyform_to_json(PF4::scalar(4, Poly<Rational>::constant(4, Rational(-1))))},
  };
  return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"foliation-restrict", "foliation-nontransversal", "cp1",
          "nitta-toy",          "symplectic-cy",            "tduality-basic"};
}

nlohmann::json builtin_scenario(const std::string& name) {
  if (name == "foliation-restrict") return foliation_restrict();
  if (name == "foliation-nontransversal") return foliation_nontransversal();
  if (name == "cp1") return cp1();
  if (name == "nitta-toy") return nitta_toy();
  if (name == "symplectic-cy") return symplectic_cy();
  if (name == "tduality-basic") return tduality_basic();
  throw ParseError("unknown scenario '" + name + "'");
}

}  // namespace purespin
