#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cvdj {

/// A {0,1}-valued black-box function on [-P, P], constant between breakpoints.
///
/// Segment i covers (b[i-1], b[i]] with b[-1] = -P and b[m] = P; the first
/// segment also contains -P. A step at r is therefore 0 for y <= r and 1 for
/// y > r.
class PiecewiseBinaryFunction {
 public:
  struct Segment {
    double lo;
    double hi;
    int value;
  };

  /// Throws std::invalid_argument unless breakpoints are strictly ascending,
  /// lie in [-P, P], and values has one more entry than breakpoints, each 0/1.
  PiecewiseBinaryFunction(double half_width, std::vector<double> breakpoints, std::vector<int> values);

  /// 0 on [-P, r], 1 on (r, P]. step(P) is constant 0, step(-P) is 1 almost
  /// everywhere, step(0) is balanced.
  static PiecewiseBinaryFunction step(double r, double half_width);
  /// Complement of step(r): 1 on [-P, r], 0 on (r, P].
  static PiecewiseBinaryFunction reflected_step(double r, double half_width);
  /// 1 on the inner interval (r1, r2], 0 elsewhere.
  static PiecewiseBinaryFunction hat(double r1, double r2, double half_width);
  static PiecewiseBinaryFunction constant(int value, double half_width);

  /// Throws std::out_of_range for y outside [-P, P].
  int operator()(double y) const;

  double half_width() const { return half_width_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<int>& values() const { return values_; }

  /// Non-degenerate segments in ascending order.
  std::vector<Segment> segments() const;

  /// Lebesgue measure of {y in [-P, P] : f(y) = 1}.
  double measure_of_ones() const;

  PiecewiseBinaryFunction complement() const;
  /// y -> f(-y).
  PiecewiseBinaryFunction mirrored() const;

  /// Inserts a breakpoint that does not change the function.
  PiecewiseBinaryFunction with_spurious_breakpoint(double at) const;

  std::string describe() const;

 private:
  double half_width_;
  std::vector<double> breakpoints_;
  std::vector<int> values_;
};

inline int f_eval(const PiecewiseBinaryFunction& f, double y) { return f(y); }

}  // namespace cvdj
