#include "muhasse/arith.hpp"

#include <algorithm>
#include <sstream>

#include "muhasse/errors.hpp"

namespace muhasse {

namespace {

using Poly = std::vector<std::uint64_t>;  // coefficients mod ℓ, low degree first

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_mod(Poly a, const Poly& f, std::uint64_t ell) {
  trim(a);
  const std::size_t df = f.size() - 1;
  // f is monic here or normalised by the caller
  std::uint64_t lead_inv = 1;
  {
    // inverse of leading coefficient mod ℓ by Fermat
    std::uint64_t base = f.back() % ell, e = ell - 2;
    while (e) {
      if (e & 1) lead_inv = lead_inv * base % ell;
      base = base * base % ell;
      e >>= 1;
    }
  }
  while (a.size() >= f.size()) {
    std::uint64_t c = a.back() * lead_inv % ell;
    std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = (a[shift + i] + ell * ell - c * f[i] % ell) % ell;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t ell) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % ell;
  return poly_mod(std::move(prod), f, ell);
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t ell) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, ell);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool is_irreducible(const Poly& f, std::uint64_t ell) {
  const std::size_t m = f.size() - 1;
  if (m <= 1) return true;
  Poly h = {0, 1};  // x
  for (std::size_t d = 1; d <= m / 2; ++d) {
    // h <- h^ℓ mod f
    Poly acc = {1};
    Poly base = h;
    std::uint64_t e = ell;
    while (e) {
      if (e & 1) acc = poly_mulmod(acc, base, f, ell);
      base = poly_mulmod(base, base, f, ell);
      e >>= 1;
    }
    h = acc;
    Poly diff = h;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + ell - 1) % ell;  // x^{ℓ^d} - x
    trim(diff);
    if (diff.empty()) return false;
    Poly g = poly_gcd(f, diff, ell);
    if (g.size() > 1) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

mpz_class mod_pos(const mpz_class& v, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<std::uint32_t> first_irreducible(std::uint32_t ell, unsigned m) {
  if (!is_prime(ell)) throw InvalidParameters("characteristic " + std::to_string(ell) + " is not prime");
  if (m == 0) throw InvalidParameters("extension degree must be at least 1");
  std::uint64_t count = 1;
  for (unsigned i = 0; i < m; ++i) count *= ell;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f(m + 1, 0);
    std::uint64_t t = idx;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = t % ell;
      t /= ell;
    }
    f[m] = 1;
    if (is_irreducible(f, ell)) return {f.begin(), f.begin() + m};
  }
  throw InternalError("no irreducible polynomial of degree " + std::to_string(m) + " over F_" +
                      std::to_string(ell));
}

// ---------------------------------------------------------------------------
// FiniteField

std::shared_ptr<const FiniteField> FiniteField::create(std::uint32_t ell, unsigned m,
                                                       std::vector<std::uint32_t> modulus) {
  if (!is_prime(ell)) throw InvalidParameters("characteristic " + std::to_string(ell) + " is not prime");
  if (m == 0 || modulus.size() != m) throw InvalidParameters("modulus must have m low coefficients");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < m; ++i) {
    q *= ell;
    if (q > (1u << 24)) throw InvalidParameters("residue field larger than 2^24 elements is not supported");
  }
  Poly f(modulus.begin(), modulus.end());
  f.push_back(1);
  if (!is_irreducible(f, ell)) throw InvalidParameters("modulus is not irreducible mod ell");

  auto field = std::shared_ptr<FiniteField>(new FiniteField());
  field->ell_ = ell;
  field->m_ = m;
  field->q_ = static_cast<std::uint32_t>(q);
  field->modulus_ = std::move(modulus);

  field->neg_.resize(q);
  for (std::uint32_t x = 0; x < q; ++x) {
    auto d = field->digits({x});
    for (auto& c : d) c = (ell - c) % ell;
    field->neg_[x] = field->from_digits(d).index;
  }
  if (q <= 1024) {
    field->add_table_.resize(q * q);
    for (std::uint32_t x = 0; x < q; ++x) {
      auto dx = field->digits({x});
      for (std::uint32_t y = 0; y < q; ++y) {
        auto dy = field->digits({y});
        for (unsigned i = 0; i < m; ++i) dy[i] = (dy[i] + dx[i]) % ell;
        field->add_table_[x * q + y] = static_cast<std::uint16_t>(field->from_digits(dy).index);
      }
    }
  }

  // primitive element
  const std::uint64_t order = q - 1;
  const auto factors = prime_factors(order);
  auto slow_pow = [&](Residue x, std::uint64_t e) {
    Residue acc{1};
    while (e) {
      if (e & 1) acc = field->slow_mul(acc, x);
      x = field->slow_mul(x, x);
      e >>= 1;
    }
    return acc;
  };
  Residue g{0};
  for (std::uint32_t cand = 1; cand < q; ++cand) {
    bool primitive = true;
    for (auto p : factors)
      if (slow_pow({cand}, order / p) == Residue{1}) {
        primitive = false;
        break;
      }
    if (primitive) {
      g = {cand};
      break;
    }
  }
  if (g.index == 0) throw InternalError("no primitive element found");
  field->log_.assign(q, 0);
  field->exp_.assign(2 * order, 0);
  Residue cur{1};
  for (std::uint64_t i = 0; i < order; ++i) {
    field->exp_[i] = cur.index;
    field->exp_[i + order] = cur.index;
    field->log_[cur.index] = static_cast<std::uint32_t>(i);
    cur = field->slow_mul(cur, g);
  }
  field->frob_exponent_.resize(m);
  std::uint64_t pe = 1 % order;
  for (unsigned e = 0; e < m; ++e) {
    field->frob_exponent_[e] = pe;
    pe = pe * ell % order;
  }
  return field;
}

Residue FiniteField::slow_mul(Residue x, Residue y) const {
  auto dx = digits(x), dy = digits(y);
  Poly a(dx.begin(), dx.end()), b(dy.begin(), dy.end());
  Poly f(modulus_.begin(), modulus_.end());
  f.push_back(1);
  trim(a);
  trim(b);
  Poly r = poly_mulmod(a, b, f, ell_);
  std::vector<std::uint32_t> out(m_, 0);
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = static_cast<std::uint32_t>(r[i]);
  return from_digits(out);
}

Residue FiniteField::generator() const {
  if (m_ == 1) return from_integer(-static_cast<std::int64_t>(modulus_[0]));
  return {ell_};
}

Residue FiniteField::from_integer(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(ell_);
  if (r < 0) r += ell_;
  return {static_cast<std::uint32_t>(r)};
}

Residue FiniteField::add(Residue x, Residue y) const {
  if (!add_table_.empty()) return {add_table_[x.index * q_ + y.index]};
  if (ell_ == 2) return {x.index ^ y.index};
  std::uint32_t a = x.index, b = y.index, out = 0, place = 1;
  for (unsigned i = 0; i < m_; ++i) {
    out += ((a % ell_ + b % ell_) % ell_) * place;
    a /= ell_;
    b /= ell_;
    place *= ell_;
  }
  return {out};
}

Residue FiniteField::inverse(Residue x) const {
  if (x.index == 0) throw PreconditionError("inverse of zero in residue field");
  std::uint32_t order = q_ - 1;
  return {exp_[(order - log_[x.index]) % order]};
}

Residue FiniteField::pow(Residue x, std::uint64_t e) const {
  if (e == 0) return one();
  if (x.index == 0) return zero();
  std::uint64_t order = q_ - 1;
  return {exp_[(static_cast<std::uint64_t>(log_[x.index]) * (e % order)) % order]};
}

Residue FiniteField::frobenius(Residue x, long e) const {
  if (x.index == 0) return x;
  long em = e % static_cast<long>(m_);
  if (em < 0) em += m_;
  if (em == 0) return x;
  std::uint64_t order = q_ - 1;
  return {exp_[(static_cast<std::uint64_t>(log_[x.index]) * frob_exponent_[em]) % order]};
}

std::vector<std::uint32_t> FiniteField::digits(Residue x) const {
  std::vector<std::uint32_t> out(m_);
  std::uint32_t t = x.index;
  for (unsigned i = 0; i < m_; ++i) {
    out[i] = t % ell_;
    t /= ell_;
  }
  return out;
}

Residue FiniteField::from_digits(std::span<const std::uint32_t> d) const {
  std::uint32_t out = 0, place = 1;
  for (unsigned i = 0; i < m_ && i < d.size(); ++i) {
    out += (d[i] % ell_) * place;
    place *= ell_;
  }
  return {out};
}

std::string FiniteField::to_string(Residue x) const {
  auto d = digits(x);
  std::ostringstream os;
  for (unsigned i = 0; i < m_; ++i) {
    if (i) os << ',';
    os << d[i];
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// WittRing

std::shared_ptr<const WittRing> WittRing::make(std::uint32_t ell, unsigned m, unsigned N) {
  if (!is_prime(ell)) throw InvalidParameters("ell = " + std::to_string(ell) + " is not prime");
  if (m == 0) throw InvalidParameters("residue degree m must be at least 1");
  if (N == 0) throw InvalidParameters("precision N must be at least 1");

  auto ring = std::shared_ptr<WittRing>(new WittRing());
  ring->ell_ = ell;
  ring->m_ = m;
  ring->N_ = N;
  mpz_ui_pow_ui(ring->pN_.get_mpz_t(), ell, N);
  ring->modulus_ = first_irreducible(ell, m);
  ring->field_ = FiniteField::create(ell, m, ring->modulus_);

  // Hensel-lift the root of f congruent to x̄^ℓ.
  RingElement y = ring->pow(ring->generator(), ell);
  bool converged = false;
  for (int iter = 0; iter < 128; ++iter) {
    RingElement fy = ring->evaluate_modulus(y, false);
    if (ring->is_zero(fy)) {
      converged = true;
      break;
    }
    RingElement dfy = ring->evaluate_modulus(y, true);
    y = ring->sub(y, ring->mul(fy, ring->inverse(dfy)));
  }
  if (!converged) throw InternalError("Frobenius lift did not converge");
  ring->sigma_gen_ = y;

  // Matrices of σ^e on the coefficient basis.
  ring->sigma_.assign(m, std::vector<mpz_class>(static_cast<std::size_t>(m) * m, 0));
  RingElement image = ring->generator();  // σ^e(x̄)
  for (unsigned e = 0; e < m; ++e) {
    RingElement power = ring->one();
    for (unsigned i = 0; i < m; ++i) {
      for (unsigned r = 0; r < m; ++r) ring->sigma_[e][static_cast<std::size_t>(i) * m + r] = power.coeffs[r];
      power = ring->mul(power, image);
    }
    if (e + 1 < m) {
      // σ^{e+1}(x̄) = σ^e(σ(x̄)), expanded through the σ^e matrix
      RingElement next = ring->zero();
      for (unsigned i = 0; i < m; ++i)
        for (unsigned r = 0; r < m; ++r)
          next.coeffs[r] += ring->sigma_[e][static_cast<std::size_t>(i) * m + r] * y.coeffs[i];
      for (auto& c : next.coeffs) c = mod_pos(c, ring->pN_);
      image = next;
    }
  }
  // sanity: σ^m(x̄) = x̄
  if (ring->frobenius(ring->frobenius(ring->generator(), static_cast<long>(m) - 1), 1) != ring->generator())
    throw InternalError("Frobenius lift does not have order m");
  return ring;
}

std::shared_ptr<const WittRing> make_ring(std::uint32_t ell, unsigned m, unsigned N) {
  return WittRing::make(ell, m, N);
}

RingElement WittRing::zero() const { return RingElement{std::vector<mpz_class>(m_, 0)}; }

RingElement WittRing::one() const {
  RingElement e = zero();
  e.coeffs[0] = 1;
  return e;
}

RingElement WittRing::generator() const {
  RingElement e = zero();
  if (m_ == 1) {
    e.coeffs[0] = mod_pos(mpz_class(-static_cast<long>(modulus_[0])), pN_);
  } else {
    e.coeffs[1] = 1;
  }
  return e;
}

RingElement WittRing::from_integer(const mpz_class& v) const {
  RingElement e = zero();
  e.coeffs[0] = mod_pos(v, pN_);
  return e;
}

RingElement WittRing::from_coefficients(std::span<const mpz_class> coeffs) const {
  if (coeffs.size() != m_) throw PreconditionError("expected " + std::to_string(m_) + " coefficients");
  RingElement e = zero();
  for (unsigned i = 0; i < m_; ++i) e.coeffs[i] = mod_pos(coeffs[i], pN_);
  return e;
}

bool WittRing::is_zero(const RingElement& x) const {
  for (const auto& c : x.coeffs)
    if (c != 0) return false;
  return true;
}

bool WittRing::is_unit(const RingElement& x) const { return !field_->is_zero(reduce(x)); }

RingElement WittRing::add(const RingElement& x, const RingElement& y) const {
  RingElement out = x;
  for (unsigned i = 0; i < m_; ++i) {
    out.coeffs[i] += y.coeffs[i];
    if (out.coeffs[i] >= pN_) out.coeffs[i] -= pN_;
  }
  return out;
}

RingElement WittRing::sub(const RingElement& x, const RingElement& y) const {
  RingElement out = x;
  for (unsigned i = 0; i < m_; ++i) {
    out.coeffs[i] -= y.coeffs[i];
    if (out.coeffs[i] < 0) out.coeffs[i] += pN_;
  }
  return out;
}

RingElement WittRing::neg(const RingElement& x) const {
  RingElement out = x;
  for (auto& c : out.coeffs)
    if (c != 0) c = pN_ - c;
  return out;
}

void WittRing::reduce_poly(std::vector<mpz_class>& poly) const {
  // x^m = -Σ f_i x^i
  for (std::size_t t = poly.size(); t-- > m_;) {
    if (poly[t] == 0) continue;
    for (unsigned i = 0; i < m_; ++i) {
      if (modulus_[i] != 0) mpz_submul_ui(poly[t - m_ + i].get_mpz_t(), poly[t].get_mpz_t(), modulus_[i]);
    }
    poly[t] = 0;
  }
  for (unsigned i = 0; i < m_; ++i) mpz_mod(poly[i].get_mpz_t(), poly[i].get_mpz_t(), pN_.get_mpz_t());
}

void WittRing::add_product(RingElement& acc, const RingElement& x, const RingElement& y) const {
  if (is_zero(x) || is_zero(y)) return;
  thread_local std::vector<mpz_class> prod;
  prod.resize(2 * m_ - 1);
  for (auto& c : prod) c = 0;
  for (unsigned i = 0; i < m_; ++i) {
    if (x.coeffs[i] == 0) continue;
    for (unsigned j = 0; j < m_; ++j)
      mpz_addmul(prod[i + j].get_mpz_t(), x.coeffs[i].get_mpz_t(), y.coeffs[j].get_mpz_t());
  }
  for (unsigned i = 0; i < m_; ++i) prod[i] += acc.coeffs[i];
  reduce_poly(prod);
  for (unsigned i = 0; i < m_; ++i) acc.coeffs[i] = prod[i];
}

RingElement WittRing::mul(const RingElement& x, const RingElement& y) const {
  RingElement out = zero();
  add_product(out, x, y);
  return out;
}

RingElement WittRing::scale(const RingElement& x, const mpz_class& c) const {
  RingElement out = x;
  for (auto& v : out.coeffs) {
    v *= c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pN_.get_mpz_t());
  }
  return out;
}

RingElement WittRing::pow(const RingElement& x, const mpz_class& e) const {
  RingElement acc = one();
  RingElement base = x;
  mpz_class k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) acc = mul(acc, base);
    base = mul(base, base);
    k >>= 1;
  }
  return acc;
}

RingElement WittRing::inverse(const RingElement& x) const {
  Residue r = reduce(x);
  if (field_->is_zero(r)) throw PreconditionError("element is not a unit");
  RingElement y = lift(field_->inverse(r));
  const RingElement two = from_integer(2);
  for (int iter = 0; iter < 64; ++iter) {
    RingElement xy = mul(x, y);
    if (xy == one()) return y;
    y = mul(y, sub(two, xy));
  }
  throw InternalError("unit inversion did not converge");
}

RingElement WittRing::divide_by_ell(const RingElement& x) const {
  RingElement out = x;
  for (auto& c : out.coeffs) {
    if (mpz_divisible_ui_p(c.get_mpz_t(), ell_) == 0)
      throw PreconditionError("element is not divisible by ell");
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), ell_);
  }
  return out;
}

RingElement WittRing::frobenius(const RingElement& x, long e) const {
  long em = e % static_cast<long>(m_);
  if (em < 0) em += m_;
  if (em == 0) return x;
  const auto& s = sigma_[static_cast<std::size_t>(em)];
  RingElement out = zero();
  for (unsigned i = 0; i < m_; ++i) {
    if (x.coeffs[i] == 0) continue;
    for (unsigned r = 0; r < m_; ++r)
      mpz_addmul(out.coeffs[r].get_mpz_t(), s[static_cast<std::size_t>(i) * m_ + r].get_mpz_t(),
                 x.coeffs[i].get_mpz_t());
  }
  for (auto& c : out.coeffs) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), pN_.get_mpz_t());
  return out;
}

std::optional<unsigned> WittRing::valuation(const RingElement& x) const {
  std::optional<unsigned> best;
  mpz_class tmp;
  for (const auto& c : x.coeffs) {
    if (c == 0) continue;
    unsigned v = 0;
    tmp = c;
    while (mpz_divisible_ui_p(tmp.get_mpz_t(), ell_)) {
      mpz_divexact_ui(tmp.get_mpz_t(), tmp.get_mpz_t(), ell_);
      ++v;
    }
    if (!best || v < *best) best = v;
  }
  return best;
}

Residue WittRing::reduce(const RingElement& x) const {
  std::vector<std::uint32_t> d(m_);
  for (unsigned i = 0; i < m_; ++i) d[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(x.coeffs[i].get_mpz_t(), ell_));
  return field_->from_digits(d);
}

RingElement WittRing::lift(Residue x) const {
  auto d = field_->digits(x);
  RingElement out = zero();
  for (unsigned i = 0; i < m_; ++i) out.coeffs[i] = d[i];
  return out;
}

RingElement WittRing::teichmuller(Residue x) const {
  if (field_->is_zero(x)) return zero();
  RingElement y = lift(x);
  const mpz_class q = field_->size();
  for (unsigned j = 0; j < N_; ++j) y = pow(y, q);
  return y;
}

RingElement WittRing::evaluate_modulus(const RingElement& y, bool derivative) const {
  // Horner on f(T) = T^m + Σ f_i T^i or on f'(T)
  std::vector<mpz_class> coeff(m_ + 1);
  for (unsigned i = 0; i < m_; ++i) coeff[i] = modulus_[i];
  coeff[m_] = 1;
  if (derivative) {
    std::vector<mpz_class> d(m_);
    for (unsigned i = 1; i <= m_; ++i) d[i - 1] = coeff[i] * i;
    coeff = std::move(d);
  }
  RingElement acc = zero();
  for (std::size_t i = coeff.size(); i-- > 0;) {
    acc = mul(acc, y);
    acc = add(acc, from_integer(coeff[i]));
  }
  return acc;
}

std::string WittRing::to_string(const RingElement& x) const {
  std::ostringstream os;
  for (unsigned i = 0; i < m_; ++i) {
    if (i) os << ',';
    os << x.coeffs[i].get_str();
  }
  return os.str();
}

}  // namespace muhasse
