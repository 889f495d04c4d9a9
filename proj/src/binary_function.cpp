#include "cvdj/binary_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cvdj {

PiecewiseBinaryFunction::PiecewiseBinaryFunction(double half_width, std::vector<double> breakpoints,
                                                 std::vector<int> values)
    : half_width_(half_width), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (!(half_width_ > 0.0) || !std::isfinite(half_width_)) {
    throw std::invalid_argument("PiecewiseBinaryFunction: half width must be positive");
  }
  if (values_.size() != breakpoints_.size() + 1) {
    throw std::invalid_argument("PiecewiseBinaryFunction: need exactly one value per segment");
  }
  for (int v : values_) {
    if (v != 0 && v != 1) throw std::invalid_argument("PiecewiseBinaryFunction: values must be 0 or 1");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double b = breakpoints_[i];
    if (!(b >= -half_width_ && b <= half_width_)) {
      throw std::invalid_argument("PiecewiseBinaryFunction: breakpoint outside [-P, P]");
    }
    if (i > 0 && !(b > breakpoints_[i - 1])) {
      throw std::invalid_argument("PiecewiseBinaryFunction: breakpoints must be strictly ascending");
    }
  }
}

PiecewiseBinaryFunction PiecewiseBinaryFunction::step(double r, double half_width) {
  return {half_width, {r}, {0, 1}};
}

PiecewiseBinaryFunction PiecewiseBinaryFunction::reflected_step(double r, double half_width) {
  return {half_width, {r}, {1, 0}};
}

PiecewiseBinaryFunction PiecewiseBinaryFunction::hat(double r1, double r2, double half_width) {
  return {half_width, {r1, r2}, {0, 1, 0}};
}

PiecewiseBinaryFunction PiecewiseBinaryFunction::constant(int value, double half_width) {
  return {half_width, {}, {value}};
}

int PiecewiseBinaryFunction::operator()(double y) const {
  if (!(y >= -half_width_ && y <= half_width_)) {
    throw std::out_of_range("f_eval: argument outside [-P, P]");
  }
  // First breakpoint >= y; segments are closed on the right.
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), y);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

std::vector<PiecewiseBinaryFunction::Segment> PiecewiseBinaryFunction::segments() const {
  std::vector<Segment> out;
  out.reserve(values_.size());
  double lo = -half_width_;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double hi = i < breakpoints_.size() ? breakpoints_[i] : half_width_;
    if (hi > lo) out.push_back({lo, hi, values_[i]});
    lo = hi;
  }
  return out;
}

double PiecewiseBinaryFunction::measure_of_ones() const {
  double m = 0.0;
  for (const auto& s : segments()) {
    if (s.value == 1) m += s.hi - s.lo;
  }
  return m;
}

PiecewiseBinaryFunction PiecewiseBinaryFunction::complement() const {
  std::vector<int> flipped(values_.size());
  std::transform(values_.begin(), values_.end(), flipped.begin(), [](int v) { return 1 - v; });
  return {half_width_, breakpoints_, std::move(flipped)};
}

PiecewiseBinaryFunction PiecewiseBinaryFunction::mirrored() const {
  std::vector<double> b(breakpoints_.rbegin(), breakpoints_.rend());
  for (double& x : b) x = -x;
  // Reversal moves the closed end of each segment to the left; this only
  // changes values on a null set.
  return {half_width_, std::move(b), std::vector<int>(values_.rbegin(), values_.rend())};
}

PiecewiseBinaryFunction PiecewiseBinaryFunction::with_spurious_breakpoint(double at) const {
  if (std::find(breakpoints_.begin(), breakpoints_.end(), at) != breakpoints_.end()) return *this;
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), at);
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
  std::vector<double> b = breakpoints_;
  std::vector<int> v = values_;
  b.insert(b.begin() + static_cast<std::ptrdiff_t>(idx), at);
  v.insert(v.begin() + static_cast<std::ptrdiff_t>(idx), values_[idx]);
  return {half_width_, std::move(b), std::move(v)};
}

std::string PiecewiseBinaryFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "P=" << half_width_ << " b=[";
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) os << (i ? "," : "") << breakpoints_[i];
  os << "] v=[";
  for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << values_[i];
  os << "]";
  return os.str();
}

}  // namespace cvdj
