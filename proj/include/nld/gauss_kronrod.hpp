#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace nld {

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kKronrodWeights[7];
    double g = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kKronrodNodes[j];
        const double s = f(c - dx) + f(c + dx);
        k += kKronrodWeights[j] * s;
        if (j % 2 == 1) g += kGaussWeights[j / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature. Stops when the
/// summed |K15 - G7| estimate is below max(abs_tol, rel_tol |I|) or after
/// `max_panels` panels (then `converged` is false).
template <class F>
IntegralEstimate integrate_gk(F&& f, double a, double b, double abs_tol, double rel_tol, int max_panels = 2000) {
    IntegralEstimate out;
    if (a == b) return out;
    std::priority_queue<detail::Panel> heap;
    heap.push(detail::kronrod15(f, a, b));
    out.evaluations = 15;
    double value = heap.top().value, error = heap.top().error;
    while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (static_cast<int>(heap.size()) >= max_panels) {
            out.converged = false;
            break;
        }
        const detail::Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
            out.converged = false;  // panel cannot be split further
            break;
        }
        heap.pop();
        const detail::Panel left = detail::kronrod15(f, worst.a, mid);
        const detail::Panel right = detail::kronrod15(f, mid, worst.b);
        out.evaluations += 30;
        heap.push(left);
        heap.push(right);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
    }
    // Re-sum to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const auto& p, const auto& q) { return p.a < q.a; });
    for (const auto& p : panels) {
        value += p.value;
        error += p.error;
    }
    out.value = value;
    out.error = error;
    return out;
}

}  // namespace nld
