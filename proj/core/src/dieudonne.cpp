#include "muhasse/dieudonne.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <tuple>
#include <utility>

#include "muhasse/errors.hpp"
#include "muhasse/linalg.hpp"

namespace muhasse {

namespace {

constexpr std::uint32_t kMaxFieldSize = 1u << 24;

std::string shape_string(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

template <class T>
void require_square(const Matrix<T>& m, std::size_t n, const char* name) {
  if (m.rows() != n || m.cols() != n)
    throw PreconditionError(std::string(name) + " must be " + shape_string(n, n) + ", got " +
                            shape_string(m.rows(), m.cols()));
}

Matrix<RingElement> ell_identity(const WittRing& ring, std::size_t n) {
  return scalar_matrix(ring, n, ring.from_integer(ring.characteristic()));
}

Matrix<RingElement> lift(const WittRing& ring, const Matrix<Residue>& m) {
  Matrix<RingElement> out(m.rows(), m.cols(), ring.zero());
  for (std::size_t i = 0; i < m.data().size(); ++i) out.data()[i] = ring.lift(m.data()[i]);
  return out;
}

bool is_zero_matrix(const FiniteField& field, const Matrix<Residue>& m) {
  for (const auto& x : m.data())
    if (!field.is_zero(x)) return false;
  return true;
}

// A·X = X·A = ℓ·I exactly.
bool is_scaled_inverse(const WittRing& ring, const Matrix<RingElement>& a, const Matrix<RingElement>& x) {
  const auto target = ell_identity(ring, a.rows());
  return multiply(ring, a, x) == target && multiply(ring, x, a) == target;
}

Matrix<RingElement> polarization_partner(const PelParams& params, const WittRing& ring,
                                         const Matrix<RingElement>& a, std::size_t units) {
  if (params.N >= 2) return scaled_inverse(ring, a, units);
  const auto& field = ring.residue_field();
  const auto abar = reduce(ring, a);
  if (rank(field, abar) != units) throw PreconditionError("F block has the wrong Smith type");
  return lift(ring, bt1_scaled_inverse(field, abar));
}

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class DigitStream {
 public:
  DigitStream(std::uint64_t key, std::uint32_t ell) : state_(key), ell_(ell), threshold_((0 - std::uint64_t{ell}) % ell) {}
  std::uint32_t next() {
    for (;;) {
      state_ += 0x9E3779B97F4A7C15ULL;
      const std::uint64_t x = mix64(state_);
      if (x >= threshold_) return static_cast<std::uint32_t>(x % ell_);
    }
  }

 private:
  std::uint64_t state_;
  std::uint64_t ell_;
  std::uint64_t threshold_;
};

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (auto p : parts) h = mix64(h ^ mix64(p + 0x9E3779B97F4A7C15ULL));
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

void PelParams::validate() const {
  if (ell < 2 || !is_prime(ell)) throw InvalidParameters("ell must be prime, got " + std::to_string(ell));
  if (r < 1) throw InvalidParameters("r must be at least 1");
  if (k < 1) throw InvalidParameters("k must be at least 1");
  if (N < 1) throw InvalidParameters("N must be at least 1");
  if (a > b) throw InvalidParameters("signature requires a < b, got a=" + std::to_string(a) + " b=" + std::to_string(b));
  if (b < 1) throw InvalidParameters("b must be at least 1");
  if (!allow_degenerate) {
    if (a == b) throw InvalidParameters("a = b needs the degenerate-signature override");
    if (a == 0) throw InvalidParameters("a = 0 needs the degenerate-signature override");
  }
  std::uint64_t q = 1;
  for (unsigned i = 0; i < 2 * k; ++i) {
    q *= ell;
    if (q > kMaxFieldSize) throw InvalidParameters("residue field larger than 2^24 elements is not supported");
  }
}

PelParams make_params(std::uint32_t ell, unsigned a, unsigned b, unsigned r, unsigned k, std::optional<unsigned> N,
                      bool allow_degenerate) {
  PelParams p;
  p.ell = ell;
  p.a = a;
  p.b = b;
  p.r = r;
  p.k = k;
  p.allow_degenerate = allow_degenerate;
  p.N = N.value_or(p.default_precision());
  p.validate();
  return p;
}

std::shared_ptr<const WittRing> ring_for(const PelParams& params) {
  static std::mutex mutex;
  static std::map<std::tuple<std::uint32_t, unsigned, unsigned>, std::shared_ptr<const WittRing>> cache;
  const auto key = std::make_tuple(params.ell, params.residue_degree(), params.N);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto ring = make_ring(params.ell, params.residue_degree(), params.N);
  cache.emplace(key, ring);
  return ring;
}

bool has_fatal(const std::vector<Finding>& findings) {
  for (const auto& f : findings)
    if (f.fatal) return true;
  return false;
}

std::string describe(const std::vector<Finding>& findings) {
  std::ostringstream out;
  for (std::size_t i = 0; i < findings.size(); ++i) {
    if (i) out << "; ";
    out << findings[i].code << ": " << findings[i].message;
    if (!findings[i].fatal) out << " (non-fatal)";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Module types

Bt1Module::Bt1Module(PelParams params, std::shared_ptr<const FiniteField> field, Matrix<Residue> f_even,
                     Matrix<Residue> f_odd, Matrix<Residue> v_even, Matrix<Residue> v_odd, bool polarization_relaxed)
    : params_(params),
      field_(std::move(field)),
      f_even_(std::move(f_even)),
      f_odd_(std::move(f_odd)),
      v_even_(std::move(v_even)),
      v_odd_(std::move(v_odd)),
      polarization_relaxed_(polarization_relaxed) {}

DieudonneModule::DieudonneModule(PelParams params, std::shared_ptr<const WittRing> ring, Matrix<RingElement> f_even,
                                 Matrix<RingElement> f_odd, Matrix<RingElement> v_even, Matrix<RingElement> v_odd,
                                 bool polarization_relaxed)
    : params_(params),
      ring_(std::move(ring)),
      f_even_(std::move(f_even)),
      f_odd_(std::move(f_odd)),
      v_even_(std::move(v_even)),
      v_odd_(std::move(v_odd)),
      polarization_relaxed_(polarization_relaxed) {}

SemilinearMap<WittRing> DieudonneModule::frobenius() const {
  const std::size_t n = f_even_.rows();
  auto m = zero_matrix(*ring_, 2 * n, 2 * n);
  m.set_block(0, n, f_odd_);
  m.set_block(n, 0, f_even_);
  return SemilinearMap<WittRing>(ring_, std::move(m), 1);
}

SemilinearMap<WittRing> DieudonneModule::verschiebung() const {
  const std::size_t n = f_even_.rows();
  auto m = zero_matrix(*ring_, 2 * n, 2 * n);
  m.set_block(0, n, v_odd_);
  m.set_block(n, 0, v_even_);
  return SemilinearMap<WittRing>(ring_, std::move(m), -1);
}

Bt1Module DieudonneModule::reduce() const {
  const auto& ring = *ring_;
  return Bt1Module(params_, ring.residue_field_ptr(), muhasse::reduce(ring, f_even_), muhasse::reduce(ring, f_odd_),
                   muhasse::reduce(ring, v_even_), muhasse::reduce(ring, v_odd_), polarization_relaxed_);
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Finding> validate(const DieudonneModule& module) {
  std::vector<Finding> out;
  const auto& p = module.params();
  const std::size_t n = p.n();
  for (const auto* m : {&module.f_even(), &module.f_odd(), &module.v_even(), &module.v_odd()})
    if (m->rows() != n || m->cols() != n) {
      out.push_back({"shape", "blocks must be " + shape_string(n, n), true});
      return out;
    }
  const auto& ring = module.ring();
  if (ring.characteristic() != p.ell || ring.degree() != p.residue_degree() || ring.precision() != p.N) {
    out.push_back({"ring", "coefficient ring does not match the parameters", true});
    return out;
  }
  const auto ell = ell_identity(ring, n);
  const auto& fe = module.f_even();
  const auto& fo = module.f_odd();
  const auto& ve = module.v_even();
  const auto& vo = module.v_odd();

  if (multiply(ring, fo, frobenius(ring, ve, 1)) != ell || multiply(ring, fe, frobenius(ring, vo, 1)) != ell)
    out.push_back({"fv", "F*V is not ell times the identity", true});
  if (multiply(ring, vo, frobenius(ring, fe, -1)) != ell || multiply(ring, ve, frobenius(ring, fo, -1)) != ell)
    out.push_back({"vf", "V*F is not ell times the identity", true});

  const auto& field = ring.residue_field();
  const std::size_t rank_fe = rank(field, reduce(ring, fe));
  const std::size_t rank_fo = rank(field, reduce(ring, fo));
  if (rank_fe != p.b * p.r || rank_fo != p.a * p.r) {
    std::ostringstream msg;
    msg << "dim ker F on M_0 is " << n - rank_fe << " (expected " << p.a * p.r << "), on M_1 is " << n - rank_fo
        << " (expected " << p.b * p.r << ")";
    out.push_back({"signature", msg.str(), true});
  }
  if (rank(field, reduce(ring, vo)) != n - rank_fe || rank(field, reduce(ring, ve)) != n - rank_fo)
    out.push_back({"exactness", "ker F differs from im V mod ell", true});

  const bool pol_ok = frobenius(ring, ve, 1) == negate(ring, fe.transpose()) &&
                      frobenius(ring, vo, 1) == negate(ring, fo.transpose());
  if (!pol_ok)
    out.push_back({"polarization", "<Fx, y> differs from sigma<x, Vy> for the standard pairing",
                   !module.polarization_relaxed()});
  return out;
}

std::vector<Finding> validate(const Bt1Module& module) {
  std::vector<Finding> out;
  const auto& p = module.params();
  const std::size_t n = p.n();
  for (const auto* m : {&module.f_even(), &module.f_odd(), &module.v_even(), &module.v_odd()})
    if (m->rows() != n || m->cols() != n) {
      out.push_back({"shape", "blocks must be " + shape_string(n, n), true});
      return out;
    }
  const auto& field = module.field();
  if (field.characteristic() != p.ell || field.degree() != p.residue_degree()) {
    out.push_back({"ring", "residue field does not match the parameters", true});
    return out;
  }
  const auto& fe = module.f_even();
  const auto& fo = module.f_odd();
  const auto& ve = module.v_even();
  const auto& vo = module.v_odd();
  if (!is_zero_matrix(field, multiply(field, fo, frobenius(field, ve, 1))) ||
      !is_zero_matrix(field, multiply(field, fe, frobenius(field, vo, 1))))
    out.push_back({"fv", "F*V is not zero mod ell", true});
  if (!is_zero_matrix(field, multiply(field, vo, frobenius(field, fe, -1))) ||
      !is_zero_matrix(field, multiply(field, ve, frobenius(field, fo, -1))))
    out.push_back({"vf", "V*F is not zero mod ell", true});
  const std::size_t rank_fe = rank(field, fe);
  const std::size_t rank_fo = rank(field, fo);
  if (rank_fe != p.b * p.r || rank_fo != p.a * p.r) {
    std::ostringstream msg;
    msg << "dim ker F on M_0 is " << n - rank_fe << " (expected " << p.a * p.r << "), on M_1 is " << n - rank_fo
        << " (expected " << p.b * p.r << ")";
    out.push_back({"signature", msg.str(), true});
  }
  if (rank(field, vo) != n - rank_fe || rank(field, ve) != n - rank_fo)
    out.push_back({"exactness", "ker F differs from im V", true});
  const bool pol_ok = frobenius(field, ve, 1) == negate(field, fe.transpose()) &&
                      frobenius(field, vo, 1) == negate(field, fo.transpose());
  if (!pol_ok)
    out.push_back({"polarization", "<Fx, y> differs from sigma<x, Vy> for the standard pairing",
                   !module.polarization_relaxed()});
  return out;
}

// ---------------------------------------------------------------------------
// Construction

Matrix<RingElement> scaled_inverse(const WittRing& ring, const Matrix<RingElement>& a, std::size_t units) {
  if (!a.is_square()) throw PreconditionError("scaled_inverse: matrix is not square");
  if (ring.precision() < 2) throw PreconditionError("scaled_inverse needs precision at least 2");
  const std::size_t n = a.rows();
  auto w = a;
  auto left = identity_matrix(ring, n);
  auto right = identity_matrix(ring, n);
  std::size_t s = 0;
  for (; s < n; ++s) {
    std::size_t pi = n, pj = n;
    for (std::size_t i = s; i < n && pi == n; ++i)
      for (std::size_t j = s; j < n; ++j)
        if (ring.is_unit(w(i, j))) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == n) break;
    if (pi != s)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w(pi, j), w(s, j));
        std::swap(left(pi, j), left(s, j));
      }
    if (pj != s)
      for (std::size_t i = 0; i < n; ++i) {
        std::swap(w(i, pj), w(i, s));
        std::swap(right(i, pj), right(i, s));
      }
    const RingElement inv = ring.inverse(w(s, s));
    for (std::size_t j = 0; j < n; ++j) {
      w(s, j) = ring.mul(w(s, j), inv);
      left(s, j) = ring.mul(left(s, j), inv);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == s || ring.is_zero(w(i, s))) continue;
      const RingElement factor = ring.neg(w(i, s));
      for (std::size_t j = 0; j < n; ++j) {
        ring.add_product(w(i, j), factor, w(s, j));
        ring.add_product(left(i, j), factor, left(s, j));
      }
    }
    for (std::size_t j = s + 1; j < n; ++j) {
      if (ring.is_zero(w(s, j))) continue;
      const RingElement factor = ring.neg(w(s, j));
      for (std::size_t i = 0; i < n; ++i) ring.add_product(right(i, j), factor, right(i, s));
      w(s, j) = ring.zero();
    }
  }
  if (s != units)
    throw PreconditionError("F block has the wrong Smith type: " + std::to_string(s) + " unit elementary divisors, expected " +
                            std::to_string(units));
  // W = diag(I_s, ℓ·W'') with W'' invertible
  const std::size_t t = n - s;
  Matrix<RingElement> rest(t, t, ring.zero());
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) rest(i, j) = ring.divide_by_ell(w(s + i, s + j));
  Matrix<RingElement> rest_inv;
  try {
    rest_inv = inverse(ring, rest);
  } catch (const PreconditionError&) {
    throw PreconditionError("F block has elementary divisors beyond ell (not invertible after inverting ell)");
  }
  auto middle = zero_matrix(ring, n, n);
  const RingElement ell = ring.from_integer(ring.characteristic());
  for (std::size_t i = 0; i < s; ++i) middle(i, i) = ell;
  middle.set_block(s, s, rest_inv);
  return multiply(ring, multiply(ring, right, middle), left);
}

Matrix<Residue> bt1_scaled_inverse(const FiniteField& field, const Matrix<Residue>& a) {
  if (!a.is_square()) throw PreconditionError("bt1_scaled_inverse: matrix is not square");
  const std::size_t n = a.rows();
  const auto kernel = nullspace(field, a);
  const auto left_kernel = nullspace(field, a.transpose());
  Matrix<Residue> out(n, n, field.zero());
  for (std::size_t t = 0; t < kernel.size(); ++t)
    for (std::size_t i = 0; i < n; ++i) {
      if (field.is_zero(kernel[t][i])) continue;
      for (std::size_t j = 0; j < n; ++j) field.add_product(out(i, j), kernel[t][i], left_kernel[t][j]);
    }
  return out;
}

DieudonneModule from_F_block(const PelParams& params, Matrix<RingElement> a) {
  params.validate();
  auto ring = ring_for(params);
  require_square(a, params.n(), "A");
  auto x = polarization_partner(params, *ring, a, params.b * params.r);
  auto b = negate(*ring, x.transpose());
  auto v_odd = frobenius(*ring, std::move(x), -1);
  auto v_even = frobenius(*ring, negate(*ring, a.transpose()), -1);
  return DieudonneModule(params, std::move(ring), std::move(a), std::move(b), std::move(v_even), std::move(v_odd));
}

DieudonneModule from_F_blocks(const PelParams& params, Matrix<RingElement> a, Matrix<RingElement> b) {
  params.validate();
  auto ring = ring_for(params);
  require_square(a, params.n(), "A");
  require_square(b, params.n(), "B");
  auto x = negate(*ring, b.transpose());
  if (!is_scaled_inverse(*ring, a, x)) x = polarization_partner(params, *ring, a, params.b * params.r);
  auto y = negate(*ring, a.transpose());
  if (!is_scaled_inverse(*ring, b, y)) y = polarization_partner(params, *ring, b, params.a * params.r);
  auto v_odd = frobenius(*ring, std::move(x), -1);
  auto v_even = frobenius(*ring, std::move(y), -1);
  return DieudonneModule(params, std::move(ring), std::move(a), std::move(b), std::move(v_even), std::move(v_odd));
}

Bt1Module bt1_from_F_block(const PelParams& params, std::shared_ptr<const FiniteField> field, Matrix<Residue> a) {
  require_square(a, params.n(), "A");
  auto x = bt1_scaled_inverse(*field, a);
  auto b = negate(*field, x.transpose());
  auto v_odd = frobenius(*field, std::move(x), -1);
  auto v_even = frobenius(*field, negate(*field, a.transpose()), -1);
  PelParams p = params;
  p.N = 1;
  return Bt1Module(p, std::move(field), std::move(a), std::move(b), std::move(v_even), std::move(v_odd));
}

RingElement antiinvariant_unit(const WittRing& ring) {
  const auto& field = ring.residue_field();
  if (field.degree() % 2 != 0) throw PreconditionError("residue field does not contain F_{ell^2}");
  for (std::uint32_t i = 0; i < field.size(); ++i) {
    const Residue w{i};
    if (field.frobenius(w, 2) == w && field.frobenius(w, 1) != w) {
      const RingElement t = ring.teichmuller(w);
      return ring.sub(t, ring.frobenius(t, 1));
    }
  }
  throw InternalError("no element of F_{ell^2} outside F_ell");
}

DieudonneModule canonical_mu_ordinary(const PelParams& params) {
  params.validate();
  auto ring = ring_for(params);
  const auto& R = *ring;
  const std::size_t n = params.n();
  const std::size_t ar = params.a * params.r;
  const std::size_t br = params.b * params.r;
  const std::size_t gr = br - ar;
  const RingElement one = R.one();
  const RingElement ell = R.from_integer(params.ell);
  auto a = zero_matrix(R, n, n);
  auto b = zero_matrix(R, n, n);
  for (std::size_t i = 0; i < ar; ++i) {
    a(br + i, i) = R.neg(one);  // F e0 = e1 = −y^f
    a(i, br + i) = ell;         // F f0 = ℓ f1 = ℓ y^e
    b(br + i, i) = ell;         // F y^e = F f1 = ℓ f0
    b(i, br + i) = R.neg(one);  // F y^f = −F e1 = −e0
  }
  if (gr > 0) {
    const RingElement gamma = antiinvariant_unit(R);
    const RingElement gamma_inv = R.inverse(gamma);
    for (std::size_t j = 0; j < gr; ++j) {
      a(ar + j, ar + j) = gamma_inv;                 // F g0 = g1 = γ^{-1} y^g
      b(ar + j, ar + j) = R.neg(R.mul(ell, gamma));  // F(γ g1) = σ(γ) ℓ g0 = −γ ℓ g0
    }
  }
  return from_F_blocks(params, std::move(a), std::move(b));
}

Matrix<RingElement> random_invertible(const WittRing& ring, std::size_t n, std::uint64_t seed, std::uint64_t tag) {
  const std::uint32_t ell = ring.characteristic();
  const unsigned m = ring.degree();
  const unsigned N = ring.precision();
  const auto& field = ring.residue_field();
  for (std::uint64_t attempt = 0;; ++attempt) {
    Matrix<RingElement> out(n, n, ring.zero());
    for (std::size_t e = 0; e < n * n; ++e) {
      std::vector<mpz_class> coeffs(m);
      for (unsigned c = 0; c < m; ++c) {
        DigitStream digits(stream_key({seed, tag, attempt, e, c}), ell);
        mpz_class power = 1;
        for (unsigned t = 0; t < N; ++t) {
          coeffs[c] += power * digits.next();
          power *= ell;
        }
      }
      out.data()[e] = ring.from_coefficients(coeffs);
    }
    if (rank(field, reduce(ring, out)) == n) return out;
  }
}

DieudonneModule random_module(const PelParams& params, std::uint64_t seed) {
  params.validate();
  auto ring = ring_for(params);
  const auto& R = *ring;
  const std::size_t n = params.n();
  const std::size_t br = params.b * params.r;
  const RingElement ell = R.from_integer(params.ell);
  const auto u1 = random_invertible(R, n, seed, 1);
  const auto u2 = random_invertible(R, n, seed, 2);
  auto d = identity_matrix(R, n);
  auto d_dual = identity_matrix(R, n);  // ℓ·D^{-1}
  for (std::size_t i = 0; i < n; ++i) (i < br ? d_dual : d)(i, i) = ell;
  auto a = multiply(R, multiply(R, u1, d), u2);
  auto x = multiply(R, multiply(R, inverse(R, u2), d_dual), inverse(R, u1));
  auto b = negate(R, x.transpose());
  auto v_odd = frobenius(R, std::move(x), -1);
  auto v_even = frobenius(R, negate(R, a.transpose()), -1);
  return DieudonneModule(params, std::move(ring), std::move(a), std::move(b), std::move(v_even), std::move(v_odd));
}

// ---------------------------------------------------------------------------
// Base change

bool preserves_pairing(const WittRing& ring, const BasisChange& g) {
  return multiply(ring, g.g0.transpose(), g.g1) == identity_matrix(ring, g.g0.rows());
}

DieudonneModule base_change(const DieudonneModule& module, const BasisChange& g, PairingPolicy policy) {
  const auto& R = module.ring();
  const std::size_t n = module.params().n();
  require_square(g.g0, n, "g0");
  require_square(g.g1, n, "g1");
  const auto g0_inv = inverse(R, g.g0);
  const auto g1_inv = inverse(R, g.g1);
  const bool compatible = preserves_pairing(R, g);
  if (!compatible && policy == PairingPolicy::require_compatible)
    throw PreconditionError("base change does not preserve the pairing (g0^T g1 != I)");
  auto fe = multiply(R, multiply(R, g1_inv, module.f_even()), frobenius(R, g.g0, 1));
  auto fo = multiply(R, multiply(R, g0_inv, module.f_odd()), frobenius(R, g.g1, 1));
  auto ve = multiply(R, multiply(R, g1_inv, module.v_even()), frobenius(R, g.g0, -1));
  auto vo = multiply(R, multiply(R, g0_inv, module.v_odd()), frobenius(R, g.g1, -1));
  return DieudonneModule(module.params(), module.ring_ptr(), std::move(fe), std::move(fo), std::move(ve),
                         std::move(vo), module.polarization_relaxed() || !compatible);
}

// ---------------------------------------------------------------------------
// Hodge filtration

HodgePoint hodge(const DieudonneModule& module) {
  const auto findings = validate(module);
  if (has_fatal(findings)) throw PreconditionError("invalid module: " + describe(findings));
  return hodge(module.reduce());
}

HodgePoint hodge(const Bt1Module& module) {
  const auto findings = validate(module);
  if (has_fatal(findings)) throw PreconditionError("invalid module: " + describe(findings));
  const auto& field = module.field();
  const std::size_t n = module.params().n();

  HodgePoint h{module.params(), module.field_ptr(), {}, {}, {}, {},
               SemilinearMap<FiniteField>(module.field_ptr(), Matrix<Residue>(), -1)};
  // Ω_i = {v : F̄ v = 0} = σ^{-1}(ker of the block)
  h.omega0 = nullspace(field, module.f_even());
  h.omega1 = nullspace(field, module.f_odd());
  h.free0 = free_columns(row_echelon(field, module.f_even()), n);
  h.free1 = free_columns(row_echelon(field, module.f_odd()), n);
  for (auto& v : h.omega0) v = frobenius(field, std::move(v), -1);
  for (auto& v : h.omega1) v = frobenius(field, std::move(v), -1);

  const std::size_t d0 = h.omega0.size(), d1 = h.omega1.size();
  Matrix<Residue> ver(d0 + d1, d0 + d1, field.zero());
  for (std::size_t j = 0; j < d0; ++j) {
    const auto image = multiply(field, module.v_even(), frobenius(field, h.omega0[j], -1));
    for (std::size_t t = 0; t < d1; ++t) ver(d0 + t, j) = image[h.free1[t]];
  }
  for (std::size_t j = 0; j < d1; ++j) {
    const auto image = multiply(field, module.v_odd(), frobenius(field, h.omega1[j], -1));
    for (std::size_t t = 0; t < d0; ++t) ver(t, d0 + j) = image[h.free0[t]];
  }
  h.ver = SemilinearMap<FiniteField>(module.field_ptr(), std::move(ver), -1);
  return h;
}

}  // namespace muhasse
