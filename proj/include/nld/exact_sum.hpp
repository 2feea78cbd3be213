#pragma once

#include <vector>

namespace nld {

/// Exact floating-point summation (Shewchuk's non-overlapping partials, as in
/// Python's math.fsum). value() is the correctly rounded sum of everything
/// added, so the result does not depend on the order or grouping of additions.
class ExactSum {
public:
    void add(double x);
    void add(const ExactSum& other);
    /// Adds a*b exactly (error-free product via fma).
    void add_product(double a, double b);
    double value() const;
    bool empty() const noexcept { return partials_.empty(); }
    const std::vector<double>& partials() const noexcept { return partials_; }

private:
    std::vector<double> partials_;
};

}  // namespace nld
