#include "doctest.h"

#include <random>

#include <json.hpp>

#include "tractorlab/clifford.hpp"

using namespace tractorlab;

namespace {

const std::vector<std::pair<int, int>> kSignatures{{1, 1}, {2, 1}, {2, 2}, {3, 2},
                                                   {3, 3}, {4, 3}, {4, 4}};

std::vector<Rational> random_exact(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<Rational> v(size_t(n), Rational(0));
  bool nonzero = false;
  for (auto& c : v) {
    c = Rational(d(rng));
    nonzero = nonzero || !c.is_zero();
  }
  if (!nonzero) v[0] = Rational(1);
  return v;
}

std::vector<Rational> project_exact(const IMat& proj, const std::vector<Rational>& v) {
  std::vector<Rational> out(v.size(), Rational(0));
  for (Eigen::Index r = 0; r < proj.rows(); ++r)
    for (Eigen::Index c = 0; c < proj.cols(); ++c)
      if (proj(r, c) != 0)
        out[size_t(r)] = out[size_t(r)] + Rational(proj(r, c)) * v[size_t(c)];
  return out;
}

bool exact_zero(const std::vector<Rational>& v) {
  for (const Rational& c : v)
    if (!c.is_zero()) return false;
  return true;
}

// g(x,y) = Σ ε_i x_i y_i, exact.
Rational metric_inner(const CliffordRep& rep, const std::vector<Rational>& x,
                      const std::vector<Rational>& y) {
  Rational acc(0);
  for (int i = 0; i < rep.dim(); ++i)
    acc = acc + Rational(rep.eps[size_t(i)]) * x[size_t(i)] * y[size_t(i)];
  return acc;
}

}  // namespace

TEST_CASE("gamma matrices satisfy the Clifford relations exactly") {
  for (auto [p, q] : kSignatures) {
    CAPTURE(p);
    CAPTURE(q);
    CliffordRep rep = build_clifford(p, q);
    REQUIRE(int(rep.gamma.size()) == p + q);
    IMat id = IMat::Identity(rep.N, rep.N);
    for (int i = 0; i < rep.dim(); ++i)
      for (int j = 0; j < rep.dim(); ++j) {
        IMat anti = rep.gamma[size_t(i)] * rep.gamma[size_t(j)] +
                    rep.gamma[size_t(j)] * rep.gamma[size_t(i)];
        IMat expect = (i == j) ? IMat(-2 * rep.eps[size_t(i)] * id) : IMat(IMat::Zero(rep.N, rep.N));
        CHECK(anti == expect);
      }
  }
}

TEST_CASE("signature (1,1) seeds: squares match the x·x = −|x|² rule") {
  CliffordRep rep = build_clifford(1, 1);
  CHECK(rep.N == 2);
  CHECK(rep.eps == std::vector<int>{1, -1});
  CHECK(rep.gamma[0] * rep.gamma[0] == IMat(-IMat::Identity(2, 2)));
  CHECK(rep.gamma[1] * rep.gamma[1] == IMat(IMat::Identity(2, 2)));
}

TEST_CASE("module dimensions and half-spinor splits") {
  CHECK(build_clifford(2, 2).N == 4);
  CHECK(build_clifford(3, 2).N == 4);
  CliffordRep r33 = build_clifford(3, 3);
  CHECK(r33.N == 8);
  REQUIRE(r33.has_half_split());
  CHECK(r33.proj_plus.cast<double>().trace() == 4);  // half-spinor dimension
  CHECK(r33.proj_plus * r33.proj_plus == r33.proj_plus);
  CHECK(r33.proj_minus * r33.proj_minus == r33.proj_minus);
  CHECK(r33.proj_plus * r33.proj_minus == IMat(IMat::Zero(8, 8)));
  CHECK(r33.proj_plus + r33.proj_minus == IMat(IMat::Identity(8, 8)));
  // projectors commute with even products
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      IMat even = r33.gamma[size_t(i)] * r33.gamma[size_t(j)];
      CHECK(r33.proj_plus * even == even * r33.proj_plus);
    }
  CHECK_FALSE(build_clifford(3, 2).has_half_split());
  CHECK(build_clifford(4, 4).N == 16);
  CHECK_THROWS_AS(build_clifford(5, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_clifford(2, 4), std::invalid_argument);
}

TEST_CASE("clifford multiplication: x·(x·v) = −|x|²·v and chirality flips") {
  std::mt19937_64 rng(42);
  for (auto [p, q] : kSignatures) {
    CliffordRep rep = build_clifford(p, q);
    for (int rep_i = 0; rep_i < 20; ++rep_i) {
      auto x = random_exact(rng, rep.dim());
      auto v = random_exact(rng, rep.N);
      auto xxv = clifford_mul_exact(rep, x, clifford_mul_exact(rep, x, v));
      Rational n2 = metric_inner(rep, x, x);
      for (int c = 0; c < rep.N; ++c) CHECK(xxv[size_t(c)] == -n2 * v[size_t(c)]);
    }
  }
  CliffordRep r22 = build_clifford(2, 2);
  Vec zero = Vec::Zero(4);
  Spinor v = make_spinor(Vec::Random(4));
  CHECK(clifford_mul(r22, zero, v).comp.norm() == 0);
  // odd action maps the + half to the − half
  std::uniform_int_distribution<int> d(-3, 3);
  for (int it = 0; it < 10; ++it) {
    auto raw = random_exact(rng, 4);
    auto plus = project_exact(r22.proj_plus, raw);
    if (exact_zero(plus)) continue;
    auto x = random_exact(rng, 4);
    auto image = clifford_mul_exact(r22, x, plus);
    CHECK(exact_zero(project_exact(r22.proj_plus, image)));
  }
}

TEST_CASE("spinor kernels: dimension and total lightlikeness") {
  std::mt19937_64 rng(7);
  CliffordRep r22 = build_clifford(2, 2);
  CliffordRep r32 = build_clifford(3, 2);
  for (int it = 0; it < 50; ++it) {
    auto raw = random_exact(rng, r22.N);
    auto half = project_exact(r22.proj_plus, raw);
    if (!exact_zero(half)) {
      auto basis = spinor_kernel_exact(r22, half);
      CHECK(int(basis.size()) == 2);
      for (const auto& a : basis)
        for (const auto& b : basis) CHECK(metric_inner(r22, a, b).is_zero());
    }
    auto v32 = random_exact(rng, r32.N);
    auto basis32 = spinor_kernel_exact(r32, v32);
    CHECK(int(basis32.size()) == 2);
    for (const auto& a : basis32)
      for (const auto& b : basis32) CHECK(metric_inner(r32, a, b).is_zero());
  }
  CHECK_THROWS_AS(spinor_kernel_exact(r22, std::vector<Rational>(4, Rational(0))),
                  std::invalid_argument);
}

TEST_CASE("purity matches the section-4 orbit statements") {
  std::mt19937_64 rng(11);
  // (2,2), (3,2), (3,3): every nonzero (half-)spinor is pure
  for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}}) {
    CliffordRep rep = build_clifford(p, q);
    int m = std::min(p, q);
    for (int it = 0; it < 100; ++it) {
      auto half = project_exact(it % 2 ? rep.proj_plus : rep.proj_minus,
                                random_exact(rng, rep.N));
      if (exact_zero(half)) continue;
      CHECK(int(spinor_kernel_exact(rep, half).size()) == m);
    }
  }
  CliffordRep r32 = build_clifford(3, 2);
  for (int it = 0; it < 100; ++it)
    CHECK(is_pure(r32, make_spinor_exact(random_exact(rng, r32.N))));

  // (4,3), (4,4): pure ⇔ null pairing
  CliffordRep r43 = build_clifford(4, 3);
  int pure43 = 0, impure43 = 0;
  for (int it = 0; it < 200; ++it) {
    auto v = random_exact(rng, r43.N);
    bool pure = int(spinor_kernel_exact(r43, v).size()) == 3;
    bool nullp = spinor_pairing_exact(r43, v, v).is_zero();
    CHECK(pure == nullp);
    (pure ? pure43 : impure43)++;
  }
  CHECK(pure43 > 0);
  CHECK(impure43 > 0);
  CliffordRep r44 = build_clifford(4, 4);
  int pure44 = 0, impure44 = 0;
  for (int it = 0; it < 200; ++it) {
    auto half = project_exact(it % 2 ? r44.proj_plus : r44.proj_minus,
                              random_exact(rng, r44.N));
    if (exact_zero(half)) continue;
    bool pure = int(spinor_kernel_exact(r44, half).size()) == 4;
    bool nullp = spinor_pairing_exact(r44, half, half).is_zero();
    CHECK(pure == nullp);
    (pure ? pure44 : impure44)++;
  }
  CHECK(pure44 > 0);
  CHECK(impure44 > 0);
}

TEST_CASE("spinor pairing: invariance, nondegeneracy, symmetry type") {
  for (auto [p, q] : kSignatures) {
    CAPTURE(p);
    CAPTURE(q);
    CliffordRep rep = build_clifford(p, q);
    // nondegenerate: gamma products are signed permutations, so |det| = 1
    CHECK(std::abs(rep.pairing.cast<double>().determinant()) == doctest::Approx(1.0));
    for (int i = 0; i < rep.dim(); ++i)
      for (int j = 0; j < rep.dim(); ++j) {
        if (i == j) continue;
        IMat gg = rep.gamma[size_t(i)] * rep.gamma[size_t(j)];
        CHECK(gg.transpose() * rep.pairing + rep.pairing * gg ==
              IMat(IMat::Zero(rep.N, rep.N)));
      }
    if (!rep.pairing_symmetric) {
      std::mt19937_64 rng(13);
      for (int it = 0; it < 10; ++it) {
        auto v = random_exact(rng, rep.N);
        CHECK(spinor_pairing_exact(rep, v, v).is_zero());
      }
    }
  }
}

TEST_CASE("kernel dimension is invariant under even Clifford elements") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 4);
  CliffordRep rep = build_clifford(3, 2);
  for (int it = 0; it < 30; ++it) {
    auto v = random_exact(rng, rep.N);
    int dim0 = int(spinor_kernel_exact(rep, v).size());
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    // γ_iγ_j is an invertible even element of the Clifford group
    std::vector<Rational> gv(size_t(rep.N), Rational(0));
    IMat gg = rep.gamma[size_t(i)] * rep.gamma[size_t(j)];
    for (int r = 0; r < rep.N; ++r)
      for (int c = 0; c < rep.N; ++c)
        if (gg(r, c) != 0) gv[size_t(r)] = gv[size_t(r)] + Rational(gg(r, c)) * v[size_t(c)];
    CHECK(int(spinor_kernel_exact(rep, gv).size()) == dim0);
  }
}

TEST_CASE("gamma matrices export as JSON integer arrays") {
  CliffordRep rep = build_clifford(2, 2);
  nlohmann::json j = nlohmann::json::parse(clifford_to_json(rep));
  CHECK(j["p"] == 2);
  CHECK(j["q"] == 2);
  CHECK(j["N"] == 4);
  REQUIRE(j["gamma"].size() == 4);
  for (int i = 0; i < 4; ++i)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        CHECK(j["gamma"][size_t(i)][size_t(r)][size_t(c)].get<std::int64_t>() ==
              rep.gamma[size_t(i)](r, c));
  CHECK((j["pairing_type"] == "symmetric" || j["pairing_type"] == "symplectic"));
}
