#pragma once

#include <boost/rational.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muhasse/dieudonne.hpp"

namespace muhasse {

using Slope = boost::rational<long long>;

struct SlopeSegment {
  Slope slope;
  std::size_t multiplicity = 0;
  friend bool operator==(const SlopeSegment&, const SlopeSegment&) = default;
};

/// Convex polygon with rational slopes in [0, 1], listed strictly increasing.
class NewtonPolygon {
 public:
  NewtonPolygon() = default;
  /// Merges equal slopes and sorts; throws PreconditionError on slopes outside
  /// [0, 1], zero multiplicities, or non-integral breakpoints.
  explicit NewtonPolygon(std::vector<SlopeSegment> segments);

  const std::vector<SlopeSegment>& segments() const { return segments_; }
  std::size_t height() const { return height_; }
  /// Total slope mass, i.e. the y-coordinate of the endpoint.
  long long endpoint() const;
  /// y-coordinate of the graph at integer x ∈ [0, height].
  Slope value_at(std::size_t x) const;
  std::size_t multiplicity(const Slope& s) const;

  friend bool operator==(const NewtonPolygon&, const NewtonPolygon&) = default;

 private:
  std::vector<SlopeSegment> segments_;
  std::size_t height_ = 0;
};

/// Slopes 0, 1/2, 1 with multiplicities 2ar, 2(b−a)r, 2ar.
NewtonPolygon mu_ordinary_polygon(const PelParams& params);

/// Lower convex hull of the points (j, valuations[j]) with slopes divided by
/// `scale`. std::nullopt marks a value known only to be ≥ `precision`; such
/// points are ignored, and PrecisionError is thrown when one of them could
/// lie below the hull or is the right endpoint.
NewtonPolygon polygon_from_valuations(const std::vector<std::optional<unsigned>>& valuations, unsigned precision,
                                      unsigned scale);

/// Characteristic polynomial (c_0..c_h) of F^{2k} = (linear) on M, computed
/// blockwise on M_0 and M_1.
std::vector<RingElement> frobenius_characteristic_polynomial(const DieudonneModule& module);

NewtonPolygon newton_polygon(const DieudonneModule& module);

/// Throws PreconditionError on height or endpoint mismatch.
bool lies_on_or_above(const NewtonPolygon& p, const NewtonPolygon& q);
bool is_symmetric(const NewtonPolygon& p);
std::size_t slope_zero_multiplicity(const NewtonPolygon& p);

/// "0", "1/2", ...
std::string slope_to_string(const Slope& s);
/// {0:2, 1/2:2, 1:2}
std::string to_text(const NewtonPolygon& p);
/// One `p/q,multiplicity` line per slope.
std::string to_csv(const NewtonPolygon& p);

}  // namespace muhasse
