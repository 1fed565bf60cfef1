#include "muhasse/newton.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "muhasse/errors.hpp"
#include "muhasse/linalg.hpp"

namespace muhasse {

namespace {

struct Point {
  long long x;
  long long y;
};

// (b − a) × (c − a)
long long cross(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

NewtonPolygon::NewtonPolygon(std::vector<SlopeSegment> segments) {
  std::map<Slope, std::size_t> merged;
  for (const auto& s : segments) {
    if (s.multiplicity == 0) throw PreconditionError("polygon segment with zero multiplicity");
    if (s.slope < Slope(0) || s.slope > Slope(1))
      throw PreconditionError("slope " + slope_to_string(s.slope) + " outside [0, 1]");
    merged[s.slope] += s.multiplicity;
  }
  Slope y = 0;
  for (const auto& [slope, mult] : merged) {
    segments_.push_back({slope, mult});
    height_ += mult;
    y += slope * static_cast<long long>(mult);
    if (y.denominator() != 1) throw PreconditionError("polygon breakpoint is not integral");
  }
}

long long NewtonPolygon::endpoint() const { return value_at(height_).numerator(); }

Slope NewtonPolygon::value_at(std::size_t x) const {
  if (x > height_) throw PreconditionError("value_at: x beyond the polygon");
  Slope y = 0;
  std::size_t pos = 0;
  for (const auto& s : segments_) {
    const std::size_t step = std::min(s.multiplicity, x - pos);
    y += s.slope * static_cast<long long>(step);
    pos += step;
    if (pos == x) break;
  }
  return y;
}

std::size_t NewtonPolygon::multiplicity(const Slope& s) const {
  for (const auto& seg : segments_)
    if (seg.slope == s) return seg.multiplicity;
  return 0;
}

NewtonPolygon mu_ordinary_polygon(const PelParams& params) {
  params.validate();
  const std::size_t ar = params.a * params.r;
  const std::size_t gr = (params.b - params.a) * params.r;
  std::vector<SlopeSegment> segs;
  if (ar) segs.push_back({Slope(0), 2 * ar});
  if (gr) segs.push_back({Slope(1, 2), 2 * gr});
  if (ar) segs.push_back({Slope(1), 2 * ar});
  return NewtonPolygon(std::move(segs));
}

NewtonPolygon polygon_from_valuations(const std::vector<std::optional<unsigned>>& valuations, unsigned precision,
                                      unsigned scale) {
  if (valuations.empty()) throw PreconditionError("no valuations");
  if (scale == 0) throw PreconditionError("scale must be positive");
  const std::size_t h = valuations.size() - 1;
  if (!valuations.front() || !valuations.back())
    throw PrecisionError("an endpoint of the Newton polygon has valuation >= " + std::to_string(precision) +
                         "; raise the precision");
  std::vector<Point> hull;
  for (std::size_t x = 0; x <= h; ++x) {
    if (!valuations[x]) continue;
    const Point p{static_cast<long long>(x), static_cast<long long>(*valuations[x])};
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }
  // A saturated coefficient only says v ≥ precision; it must not be able to dip below the hull.
  std::size_t seg = 0;
  for (std::size_t x = 0; x <= h; ++x) {
    while (seg + 1 < hull.size() && hull[seg + 1].x < static_cast<long long>(x)) ++seg;
    if (valuations[x]) continue;
    const Point& p = hull[seg];
    const Point& q = hull[seg + 1];
    // hull(x) > precision  ⟺  p.y·(q.x−p.x) + (q.y−p.y)·(x−p.x) > precision·(q.x−p.x)
    const long long dx = q.x - p.x;
    const long long lhs = p.y * dx + (q.y - p.y) * (static_cast<long long>(x) - p.x);
    if (lhs > static_cast<long long>(precision) * dx)
      throw PrecisionError("Newton polygon depends on a coefficient of valuation >= " + std::to_string(precision) +
                           " at x = " + std::to_string(x) + "; raise the precision");
  }
  std::vector<SlopeSegment> segs;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const long long dx = hull[i + 1].x - hull[i].x;
    const long long dy = hull[i + 1].y - hull[i].y;
    segs.push_back({Slope(dy, dx * static_cast<long long>(scale)), static_cast<std::size_t>(dx)});
  }
  return NewtonPolygon(std::move(segs));
}

std::vector<RingElement> frobenius_characteristic_polynomial(const DieudonneModule& module) {
  const auto& ring = module.ring();
  const unsigned k = module.params().k;
  const SemilinearMap<WittRing> f_even(module.ring_ptr(), module.f_even(), 1);
  const SemilinearMap<WittRing> f_odd(module.ring_ptr(), module.f_odd(), 1);
  const auto phi0 = iterate(compose(f_odd, f_even), k);
  const auto phi1 = iterate(compose(f_even, f_odd), k);
  if (phi0.twist() % static_cast<long>(ring.frobenius_order()) != 0)
    throw InternalError("F^{2k} is not linear over the coefficient ring");
  return polynomial_product(ring, characteristic_polynomial(ring, phi0.matrix()),
                            characteristic_polynomial(ring, phi1.matrix()));
}

NewtonPolygon newton_polygon(const DieudonneModule& module) {
  const auto findings = validate(module);
  if (has_fatal(findings)) throw PreconditionError("invalid module: " + describe(findings));
  const auto& ring = module.ring();
  const auto cp = frobenius_characteristic_polynomial(module);
  const std::size_t h = cp.size() - 1;
  std::vector<std::optional<unsigned>> vals(h + 1);
  for (std::size_t x = 0; x <= h; ++x) vals[x] = ring.valuation(cp[h - x]);
  return polygon_from_valuations(vals, ring.precision(), 2 * module.params().k);
}

bool lies_on_or_above(const NewtonPolygon& p, const NewtonPolygon& q) {
  if (p.height() != q.height()) throw PreconditionError("polygons have different heights");
  if (p.endpoint() != q.endpoint()) throw PreconditionError("polygons have different endpoints");
  for (std::size_t x = 0; x <= p.height(); ++x)
    if (p.value_at(x) < q.value_at(x)) return false;
  return true;
}

bool is_symmetric(const NewtonPolygon& p) {
  for (const auto& s : p.segments())
    if (p.multiplicity(Slope(1) - s.slope) != s.multiplicity) return false;
  return true;
}

std::size_t slope_zero_multiplicity(const NewtonPolygon& p) { return p.multiplicity(Slope(0)); }

std::string slope_to_string(const Slope& s) {
  if (s.denominator() == 1) return std::to_string(s.numerator());
  return std::to_string(s.numerator()) + "/" + std::to_string(s.denominator());
}

std::string to_text(const NewtonPolygon& p) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < p.segments().size(); ++i) {
    if (i) out << ", ";
    out << slope_to_string(p.segments()[i].slope) << ':' << p.segments()[i].multiplicity;
  }
  out << '}';
  return out.str();
}

std::string to_csv(const NewtonPolygon& p) {
  std::ostringstream out;
  for (const auto& s : p.segments())
    out << s.slope.numerator() << '/' << s.slope.denominator() << ',' << s.multiplicity << '\n';
  return out.str();
}

}  // namespace muhasse
