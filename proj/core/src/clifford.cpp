#include "tractorlab/clifford.hpp"

#include <json.hpp>

namespace tractorlab {

namespace {

IMat kron(const IMat& a, const IMat& b) {
  IMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

IMat seed_E() {  // E² = +Id
  IMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

IMat seed_F() {  // F² = −Id
  IMat m(2, 2);
  m << 0, -1, 1, 0;
  return m;
}

IMat seed_S3() {
  IMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

IMat volume_element(const std::vector<IMat>& gamma, int N) {
  IMat om = IMat::Identity(N, N);
  for (const IMat& g : gamma) om = om * g;
  return om;
}

// Split-signature rep (q,q) by tensor doubling; new directions go first in
// each ε block so the leftover block is the previous rep twisted by σ₃.
CliffordRep build_split(int q) {
  CliffordRep rep;
  rep.p = rep.q = q;
  if (q == 1) {
    rep.N = 2;
    rep.gamma = {seed_F(), seed_E()};
    rep.eps = {1, -1};
  } else {
    CliffordRep sub = build_split(q - 1);
    rep.N = 2 * sub.N;
    IMat id = IMat::Identity(sub.N, sub.N);
    rep.gamma.push_back(kron(seed_F(), id));
    for (int i = 0; i < q - 1; ++i) rep.gamma.push_back(kron(seed_S3(), sub.gamma[size_t(i)]));
    rep.gamma.push_back(kron(seed_E(), id));
    for (int i = 0; i < q - 1; ++i)
      rep.gamma.push_back(kron(seed_S3(), sub.gamma[size_t(q - 1 + i)]));
    rep.eps.assign(size_t(q), 1);
    rep.eps.insert(rep.eps.end(), size_t(q), -1);
  }
  rep.omega = volume_element(rep.gamma, rep.N);
  if (rep.omega * rep.omega != IMat::Identity(rep.N, rep.N))
    throw std::logic_error("volume element does not square to the identity");
  IMat pp = IMat::Identity(rep.N, rep.N) + rep.omega;
  IMat pm = IMat::Identity(rep.N, rep.N) - rep.omega;
  for (Eigen::Index i = 0; i < pp.size(); ++i)
    if (pp.data()[i] % 2 != 0) throw std::logic_error("half-spinor projector not integral");
  rep.proj_plus = pp / 2;
  rep.proj_minus = pm / 2;
  return rep;
}

void attach_pairing(CliffordRep& rep) {
  int n = rep.dim();
  IMat id = IMat::Identity(rep.N, rep.N);
  auto block_product = [&](int sign) {
    IMat a = id;
    for (int i = 0; i < n; ++i)
      if (rep.eps[size_t(i)] == sign) a = a * rep.gamma[size_t(i)];
    return a;
  };
  std::vector<IMat> candidates{block_product(1), block_product(-1), id};
  if (rep.omega.size() > 0) {
    candidates.push_back(rep.omega * candidates[0]);
    candidates.push_back(rep.omega * candidates[1]);
  }
  for (const IMat& a : candidates) {
    bool sym = (a.transpose() == a);
    bool skew = (a.transpose() == -a);
    if (!sym && !skew) continue;
    bool invariant = true;
    for (int i = 0; i < n && invariant; ++i)
      for (int j = i + 1; j < n && invariant; ++j) {
        IMat gg = rep.gamma[size_t(i)] * rep.gamma[size_t(j)];
        if (gg.transpose() * a + a * gg != IMat::Zero(rep.N, rep.N)) invariant = false;
      }
    if (!invariant) continue;
    rep.pairing = a;
    rep.pairing_symmetric = sym;
    return;
  }
  throw std::logic_error("no invariant spinor pairing found in the candidate set");
}

}  // namespace

CliffordRep build_clifford(int p, int q) {
  if (q < 1 || (p != q && p != q + 1) || std::max(p, q) > 4 || p + q < 2)
    throw std::invalid_argument("unsupported Clifford signature (" + std::to_string(p) +
                                "," + std::to_string(q) + ")");
  CliffordRep rep = build_split(q);
  if (p == q + 1) {
    // adjoin the volume element as one extra negative direction
    rep.gamma.push_back(rep.omega);
    rep.eps.push_back(-1);
    rep.p = q + 1;
    rep.omega = IMat();
    rep.proj_plus = IMat();
    rep.proj_minus = IMat();
  }
  attach_pairing(rep);
  return rep;
}

Spinor make_spinor(Vec comp, Chirality chirality) {
  return Spinor{std::move(comp), chirality, {}};
}

Spinor make_spinor_exact(std::vector<Rational> comp, Chirality chirality) {
  Vec v(Eigen::Index(comp.size()));
  for (size_t i = 0; i < comp.size(); ++i) v[Eigen::Index(i)] = comp[i].to_double();
  return Spinor{std::move(v), chirality, std::move(comp)};
}

Spinor clifford_mul(const CliffordRep& rep, const Vec& x, const Spinor& v) {
  if (x.size() != rep.dim()) throw std::invalid_argument("vector dimension mismatch");
  if (v.comp.size() != rep.N) throw std::invalid_argument("spinor dimension mismatch");
  Vec out = Vec::Zero(rep.N);
  for (int i = 0; i < rep.dim(); ++i) {
    if (x[i] == 0) continue;
    out += x[i] * (rep.gamma[size_t(i)].cast<double>() * v.comp);
  }
  Chirality ch = v.chirality;
  if (rep.has_half_split() && ch != Chirality::Full)
    ch = (ch == Chirality::Plus) ? Chirality::Minus : Chirality::Plus;
  return Spinor{std::move(out), ch, {}};
}

std::vector<Rational> clifford_mul_exact(const CliffordRep& rep,
                                         const std::vector<Rational>& x,
                                         const std::vector<Rational>& v) {
  if (int(x.size()) != rep.dim() || int(v.size()) != rep.N)
    throw std::invalid_argument("dimension mismatch");
  std::vector<Rational> out(size_t(rep.N), Rational(0));
  for (int i = 0; i < rep.dim(); ++i) {
    if (x[size_t(i)].is_zero()) continue;
    const IMat& g = rep.gamma[size_t(i)];
    for (int r = 0; r < rep.N; ++r)
      for (int c = 0; c < rep.N; ++c)
        if (g(r, c) != 0)
          out[size_t(r)] = out[size_t(r)] + x[size_t(i)] * v[size_t(c)] * Rational(g(r, c));
  }
  return out;
}

std::vector<std::vector<Rational>> spinor_kernel_exact(const CliffordRep& rep,
                                                       const std::vector<Rational>& v) {
  bool zero = true;
  for (const Rational& c : v) zero = zero && c.is_zero();
  if (zero) throw std::invalid_argument("kernel of the zero spinor is undefined");
  // rows of the map x ↦ x·v; columns indexed by the directions
  std::vector<std::vector<Rational>> m(size_t(rep.N),
                                       std::vector<Rational>(size_t(rep.dim()), Rational(0)));
  for (int i = 0; i < rep.dim(); ++i) {
    const IMat& g = rep.gamma[size_t(i)];
    for (int r = 0; r < rep.N; ++r) {
      Rational acc(0);
      for (int c = 0; c < rep.N; ++c)
        if (g(r, c) != 0) acc = acc + Rational(g(r, c)) * v[size_t(c)];
      m[size_t(r)][size_t(i)] = acc;
    }
  }
  return rational_nullspace(m);
}

Mat spinor_kernel(const CliffordRep& rep, const Spinor& v) {
  if (v.is_exact()) {
    auto basis = spinor_kernel_exact(rep, v.exact);
    Mat out(rep.dim(), int(basis.size()));
    for (size_t c = 0; c < basis.size(); ++c)
      for (int r = 0; r < rep.dim(); ++r) out(r, int(c)) = basis[c][size_t(r)].to_double();
    return out;
  }
  if (v.comp.norm() == 0) throw std::invalid_argument("kernel of the zero spinor is undefined");
  Mat m(rep.N, rep.dim());
  for (int i = 0; i < rep.dim(); ++i)
    m.col(i) = rep.gamma[size_t(i)].cast<double>() * v.comp;
  return nullspace(m, 1e-10);
}

int spinor_kernel_dim(const CliffordRep& rep, const Spinor& v) {
  if (v.is_exact()) return int(spinor_kernel_exact(rep, v.exact).size());
  return int(spinor_kernel(rep, v).cols());
}

bool is_pure(const CliffordRep& rep, const Spinor& v) {
  return spinor_kernel_dim(rep, v) == std::min(rep.p, rep.q);
}

double spinor_pairing(const CliffordRep& rep, const Spinor& v, const Spinor& w) {
  return v.comp.dot(rep.pairing.cast<double>() * w.comp);
}

Rational spinor_pairing_exact(const CliffordRep& rep, const std::vector<Rational>& v,
                              const std::vector<Rational>& w) {
  Rational acc(0);
  for (int r = 0; r < rep.N; ++r)
    for (int c = 0; c < rep.N; ++c)
      if (rep.pairing(r, c) != 0)
        acc = acc + v[size_t(r)] * Rational(rep.pairing(r, c)) * w[size_t(c)];
  return acc;
}

std::string clifford_to_json(const CliffordRep& rep) {
  nlohmann::json j;
  j["p"] = rep.p;
  j["q"] = rep.q;
  j["N"] = rep.N;
  j["eps"] = rep.eps;
  auto mat_to_json = [](const IMat& m) {
    std::vector<std::vector<std::int64_t>> rows;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::vector<std::int64_t> row;
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  for (const IMat& g : rep.gamma) j["gamma"].push_back(mat_to_json(g));
  j["pairing"] = mat_to_json(rep.pairing);
  j["pairing_type"] = rep.pairing_symmetric ? "symmetric" : "symplectic";
  return j.dump(2);
}

}  // namespace tractorlab
