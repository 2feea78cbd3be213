#include "nld/problem.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nld/error.hpp"

namespace nld {

DataFunction DataFunction::with_exp_decay(double lambda) const {
    DataFunction copy = *this;
    copy.time_factor_ = TimeFactor::Exp;
    copy.decay_rate_ = lambda;
    return copy;
}

double DataFunction::space1d(double x, const Domain& domain) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return params_[0];
        case Kind::SinAffine:
            if (domain.signed_distance(x) <= 0.0) return 0.0;
            return std::sin(params_[0] * std::numbers::pi * x + params_[1]);
        case Kind::Polynomial: {
            double acc = 0.0;
            for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * x + *it;
            return acc;
        }
    }
    return 0.0;
}

double DataFunction::space(std::span<const double> x, const Domain& domain) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return params_[0];
        case Kind::SinAffine:
            if (!domain.contains(x)) return 0.0;
            return std::sin(params_[0] * std::numbers::pi * x[0] + params_[1]);
        case Kind::Polynomial: return space1d(x[0], domain);
    }
    return 0.0;
}

double DataFunction::time(double t) const {
    return time_factor_ == TimeFactor::One ? 1.0 : std::exp(-decay_rate_ * t);
}

double DataFunction::sup_norm(const Domain& domain) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return std::abs(params_[0]);
        case Kind::SinAffine: return 1.0;
        case Kind::Polynomial: {
            const auto* iv = std::get_if<Interval>(&domain.shape());
            if (!iv) throw ParameterError("polynomial sup-norm needs an interval domain");
            // Dense sampling; the catalog only carries low-degree polynomials.
            double best = 0.0;
            constexpr int kSamples = 4096;
            for (int i = 0; i <= kSamples; ++i) {
                const double x = iv->a + (iv->b - iv->a) * i / kSamples;
                best = std::max(best, std::abs(space1d(x, domain)));
            }
            return best;
        }
    }
    return 0.0;
}

std::string DataFunction::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::Zero: out << "zero"; break;
        case Kind::Constant: out << "constant(" << params_[0] << ")"; break;
        case Kind::SinAffine: out << "sin_affine(" << params_[0] << "," << params_[1] << ")"; break;
        case Kind::Polynomial: out << "polynomial(" << params_.size() << " coeffs)"; break;
    }
    if (time_factor_ == TimeFactor::Exp) out << "*exp(-" << decay_rate_ << "t)";
    return out.str();
}

void ProblemSpec::validate() const {
    if (domain.dim() != drift.dim() || domain.dim() != law.dim()) {
        throw ParameterError("domain, drift and law dimensions must agree");
    }
}

}  // namespace nld
