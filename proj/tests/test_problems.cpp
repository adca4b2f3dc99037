#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rkstab/catalog.hpp"
#include "rkstab/problems.hpp"

using namespace rkstab;

namespace {

std::mt19937_64 rng(2024);

Vec<double> random_vec(int dim, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vec<double> v(dim);
  for (auto& x : v) x = dist(rng);
  return v;
}

Vec<double> rhs_at(const Problem<double>& p, double t, const Vec<double>& u) {
  Vec<double> du(p.dim);
  p.rhs(t, u, du);
  return du;
}

// central finite differences as an independent check of the analytic oracles
Vec<double> fd_dir1(const Problem<double>& p, const Vec<double>& u, const Vec<double>& v,
                    double h) {
  Vec<double> up(u), um(u);
  for (int i = 0; i < p.dim; ++i) {
    up[i] += h * v[i];
    um[i] -= h * v[i];
  }
  Vec<double> fp = p.oracle->eval(up, {}), fm = p.oracle->eval(um, {});
  Vec<double> out(p.dim);
  for (int i = 0; i < p.dim; ++i) out[i] = (fp[i] - fm[i]) / (2 * h);
  return out;
}

Vec<double> fd_dir2(const Problem<double>& p, const Vec<double>& u, const Vec<double>& v,
                    const Vec<double>& w, double h) {
  Vec<double> up(u), um(u);
  for (int i = 0; i < p.dim; ++i) {
    up[i] += h * w[i];
    um[i] -= h * w[i];
  }
  std::vector<Vec<double>> dv{v};
  Vec<double> fp = p.oracle->eval(up, dv), fm = p.oracle->eval(um, dv);
  Vec<double> out(p.dim);
  for (int i = 0; i < p.dim; ++i) out[i] = (fp[i] - fm[i]) / (2 * h);
  return out;
}

}  // namespace

TEST_CASE("cubic rotation basics") {
  auto p = cubic_rotation<double>();
  auto f = rhs_at(p, 0.0, {1.0, 0.0});
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(1.0));
  for (int i = 0; i < 1000; ++i) {
    auto u = random_vec(2);
    auto fu = rhs_at(p, 0.0, u);
    double uf = u[0] * fu[0] + u[1] * fu[1];
    double scale = std::hypot(u[0], u[1]) * std::hypot(fu[0], fu[1]) + 1e-30;
    CHECK(std::abs(uf) <= 1e-12 * scale);
  }
}

TEST_CASE("inverse square rotation basics and the step identity for g") {
  auto p = inverse_square_rotation<double>();
  auto f = rhs_at(p, 0.0, {1.0, 0.0});
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(1.0));

  Vec<double> zero{0.0, 0.0};
  CHECK_THROWS_AS(p.oracle->eval(zero, {}), std::domain_error);

  // g(u + dt/2 f(u)) (1 + dt^2/4 g(u)^2) == g(u) for g = 1/|u|^2, u = (r, 0)
  auto g = [](const Vec<double>& u) { return 1.0 / (u[0] * u[0] + u[1] * u[1]); };
  for (double r : {0.5, 1.0, 2.0, 3.7}) {
    for (double dt : {0.1, 1.0, 2.5}) {
      Vec<double> u{r, 0.0};
      auto fu = rhs_at(p, 0.0, u);
      Vec<double> mid{u[0] + dt / 2 * fu[0], u[1] + dt / 2 * fu[1]};
      double lhs = g(mid) * (1 + dt * dt / 4 * g(u) * g(u));
      CHECK(lhs == doctest::Approx(g(u)).epsilon(1e-14));
    }
  }
}

TEST_CASE("analytic oracles agree with finite differences") {
  auto check = [](const Problem<double>& p, const Vec<double>& u) {
    auto v = random_vec(p.dim, -1, 1), w = random_vec(p.dim, -1, 1);
    double h = 1e-6;
    std::vector<Vec<double>> dv{v};
    auto exact1 = p.oracle->eval(u, dv);
    auto approx1 = fd_dir1(p, u, v, h);
    std::vector<Vec<double>> dvw{v, w};
    auto exact2 = p.oracle->eval(u, dvw);
    auto approx2 = fd_dir2(p, u, v, w, h);
    for (int i = 0; i < p.dim; ++i) {
      CHECK(exact1[i] == doctest::Approx(approx1[i]).epsilon(1e-6));
      CHECK(exact2[i] == doctest::Approx(approx2[i]).epsilon(1e-5));
    }
  };
  for (int rep = 0; rep < 20; ++rep) {
    check(cubic_rotation<double>(), random_vec(2));
    auto u = random_vec(2, 0.5, 2.0);  // keep away from the singularity
    check(inverse_square_rotation<double>(), u);
    check(semiinner_bushy<double>(3), random_vec(3));
  }
}

TEST_CASE("oracle symmetry in the directions") {
  auto p = inverse_square_rotation<double>();
  for (int rep = 0; rep < 50; ++rep) {
    auto u = random_vec(2, 0.5, 2.0);
    auto v = random_vec(2), w = random_vec(2);
    std::vector<Vec<double>> vw{v, w}, wv{w, v};
    auto a = p.oracle->eval(u, vw);
    auto b = p.oracle->eval(u, wv);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-13));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-13));
  }
}

TEST_CASE("bushy problem: elementary differentials isolate exactly one bushy tree") {
  TreeTable tt = enumerate_trees(5);
  for (int k = 1; k <= 3; ++k) {
    auto p = semiinner_bushy<double>(k);
    auto diffs = elementary_differentials<double>(tt, *p.oracle, p.default_u0, 5);
    CHECK(diffs[0][0] == doctest::Approx(1.0));  // F(leaf) = (1,0,0)
    CHECK(diffs[0][1] == doctest::Approx(0.0));
    CHECK(diffs[0][2] == doctest::Approx(0.0));
    double kfact = 1;
    for (int i = 2; i <= k; ++i) kfact *= i;
    for (int l = 1; l <= 4; ++l) {
      auto& f = diffs[tt.bushy_id(l)];
      double expect = l == k ? kfact : 0.0;
      CHECK(f[0] == doctest::Approx(0.0));
      CHECK(f[1] == doctest::Approx(0.0));
      CHECK(f[2] == doctest::Approx(expect));
    }
  }
}

TEST_CASE("bushy problem: semi inner product orthogonality on random samples") {
  for (int k = 1; k <= 3; ++k) {
    auto p = semiinner_bushy<double>(k);
    for (int i = 0; i < 1000; ++i) {
      auto u = random_vec(3);
      auto fu = rhs_at(p, 0.0, u);
      double uf = gram_inner<double>(p.gram_diag, u, fu);
      CHECK(std::abs(uf) <= 1e-12 * (1 + std::abs(u[1] * fu[1]) + std::abs(u[2] * fu[2])));
    }
  }
}

TEST_CASE("advection operator: skew symmetry and scaling") {
  for (int m : {4, 10, 50}) {
    auto p = advection_sin_t2<double>(m);
    REQUIRE(p.dim == m);
    double t = 1.3;  // sin(t^2) != 0
    for (int rep = 0; rep < 20; ++rep) {
      auto u = random_vec(m), v = random_vec(m);
      auto lu = rhs_at(p, t, u), lv = rhs_at(p, t, v);
      double a = gram_inner<double>(p.gram_diag, u, lv);
      double b = gram_inner<double>(p.gram_diag, lu, v);
      CHECK(a == doctest::Approx(-b).epsilon(1e-12));
    }
    // entrywise skew symmetry of the assembled operator
    for (int j = 0; j < m; ++j) {
      Vec<double> e(m, 0.0);
      e[j] = 1.0;
      auto col = rhs_at(p, t, e);
      for (int i = 0; i < m; ++i) {
        Vec<double> ei(m, 0.0);
        ei[i] = 1.0;
        auto coli = rhs_at(p, t, ei);
        CHECK(col[i] == doctest::Approx(-coli[j]).epsilon(1e-12));
      }
    }
  }
  auto p = advection_sin_t2<double>(50);
  Vec<double> ones(50, 1.0);
  CHECK(gram_energy<double>(p.gram_diag, ones) == doctest::Approx(2.0));
  auto l0 = rhs_at(p, 0.0, random_vec(50));
  for (double x : l0) CHECK(x == 0.0);  // sin(0) = 0
  CHECK_THROWS_AS(advection_sin_t2<double>(3), std::invalid_argument);
}

TEST_CASE("rotation by sin(t)") {
  auto p = rotation_sin<double>();
  auto l0 = rhs_at(p, 0.0, {1.0, 0.0});
  CHECK(l0[0] == 0.0);
  CHECK(l0[1] == 0.0);
  auto l_half_pi = rhs_at(p, M_PI / 2, {1.0, 0.0});
  CHECK(l_half_pi[1] == doctest::Approx(1.0));
}

TEST_CASE("spike construction geometry for ssprk33") {
  auto tab = *find_catalog_method("ssprk33");
  double dt = 1e-2, eps = 1e-3;
  auto sp = spike_rotation<double>(tab, 2, dt, eps, false);  // c = 1/2, b = 2/3
  CHECK(sp.center == doctest::Approx(0.005));
  CHECK(sp.half_width == doctest::Approx(0.0025));
  CHECK(sp.lambda(sp.center) == doctest::Approx(eps));
  CHECK(sp.lambda(0.0) == 0.0);        // node time c_1 dt
  CHECK(sp.lambda(0.01) == 0.0);       // node time c_2 dt
  CHECK(std::abs(sp.lambda(0.005 + 0.0025)) <= eps * 1e-12);  // support edge, 1 ulp slack
  CHECK(sp.lambda(0.005 + 1.5 * 0.0025) == 0.0);  // strictly outside the support
  // hat slope equals the promised Lipschitz constant
  double mid = sp.center + sp.half_width / 2;
  CHECK((sp.lambda(sp.center) - sp.lambda(mid)) / (mid - sp.center) ==
        doctest::Approx(eps / sp.half_width));

  auto multi = spike_rotation<double>(tab, 2, dt, eps, true);
  CHECK(multi.lambda(sp.center + 17 * dt) == doctest::Approx(eps));
  CHECK(multi.lambda(17 * dt) == 0.0);
  CHECK(multi.lambda(18 * dt) == 0.0);
}

TEST_CASE("spike construction refusals") {
  auto c4s2 = *find_catalog_method("paper_c4s2");
  for (int k = 0; k < 4; ++k)
    CHECK_THROWS_AS(spike_rotation<double>(c4s2, k, 0.01, 1e-3, false),
                    std::invalid_argument);

  auto counterex = *find_catalog_method("paper_counterex");
  CHECK_THROWS_AS(spike_rotation<double>(counterex, 1, 0.01, 1e-3, false),
                  std::invalid_argument);  // unique node but b = 0
  CHECK_THROWS_AS(spike_rotation<double>(counterex, 0, 0.01, 1e-3, false),
                  std::invalid_argument);  // quadrature but duplicated node

  auto ssprk33 = *find_catalog_method("ssprk33");
  CHECK_NOTHROW(spike_rotation<double>(ssprk33, 0, 0.01, 1e-3, false));
  // c_2 - c_1 = 1 is an integer: multi-step construction refused
  CHECK_THROWS_AS(spike_rotation<double>(ssprk33, 0, 0.01, 1e-3, true),
                  std::invalid_argument);

  auto midpoint = *find_catalog_method("midpoint");
  CHECK_NOTHROW(spike_rotation<double>(midpoint, 1, 0.01, 1e-3, true));
}

TEST_CASE("semibounded flags hold on random samples for every catalog problem") {
  std::vector<Problem<double>> probs{cubic_rotation<double>(),
                                     inverse_square_rotation<double>(),
                                     semiinner_bushy<double>(2),
                                     rotation_sin<double>(),
                                     advection_sin_t2<double>(10),
                                     spike_rotation<double>(*find_catalog_method("ssprk33"),
                                                            2, 0.01, 1e-3, true)
                                         .problem};
  std::uniform_real_distribution<double> tdist(0.0, 10.0);
  for (const auto& p : probs) {
    REQUIRE(p.semibounded);
    for (int i = 0; i < 1000; ++i) {
      auto u = random_vec(p.dim, 0.3, 2.0);  // positive components: safe for invsqrot
      double t = tdist(rng);
      auto fu = rhs_at(p, t, u);
      double uf = gram_inner<double>(p.gram_diag, u, fu);
      double un = std::sqrt(std::max(gram_energy<double>(p.gram_diag, u), 0.0));
      double fn = std::sqrt(std::max(gram_energy<double>(p.gram_diag, fu), 0.0));
      double bound = 1e-12 * (un * fn + 1e-30);
      CHECK(uf <= bound);
      if (p.conservative) CHECK(std::abs(uf) <= bound);
    }
  }
}

TEST_CASE("problem catalog resolution") {
  CHECK(resolve_problem<double>("cubicrot").name == "cubicrot");
  CHECK(resolve_problem<double>("advection50").dim == 50);
  CHECK(resolve_problem<double>("advection:16").dim == 16);
  CHECK(resolve_problem<double>("bushy:2").dim == 3);
  CHECK(resolve_problem<double>("spike:ssprk33:3", 0.01, 1e-3).dim == 2);
  CHECK_THROWS_AS(resolve_problem<double>("nosuch"), std::invalid_argument);
  CHECK_THROWS_AS(resolve_problem<double>("spike:paper_c4s2:1", 0.01, 1e-3),
                  std::invalid_argument);
}
