#include "nld/exact_sum.hpp"

#include <cmath>
#include <utility>

#include "nld/error.hpp"

namespace nld {

void ExactSum::add(double x) {
    if (!std::isfinite(x)) throw ParameterError("ExactSum accepts finite values only");
    std::size_t kept = 0;
    for (std::size_t j = 0; j < partials_.size(); ++j) {
        double y = partials_[j];
        if (std::abs(x) < std::abs(y)) std::swap(x, y);
        const double hi = x + y;
        const double lo = y - (hi - x);
        if (lo != 0.0) partials_[kept++] = lo;
        x = hi;
    }
    partials_.resize(kept);
    partials_.push_back(x);
}

void ExactSum::add(const ExactSum& other) {
    for (double p : other.partials_) add(p);
}

void ExactSum::add_product(double a, double b) {
    const double p = a * b;
    const double e = std::fma(a, b, -p);
    add(p);
    if (e != 0.0) add(e);
}

double ExactSum::value() const {
    // Correct rounding of the partials, following CPython's math_fsum.
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
        const double x = hi;
        const double y = partials_[--n];
        hi = x + y;
        const double yr = hi - x;
        lo = y - yr;
        if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        const double yr = x - hi;
        if (y == yr) hi = x;
    }
    return hi;
}

}  // namespace nld
