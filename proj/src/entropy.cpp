#include "lowtail/entropy.hpp"

#include "lowtail/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace lowtail {

double xlogx(double x) {
    if (x < 0.0) throw std::domain_error("xlogx: negative argument");
    return x == 0.0 ? 0.0 : x * std::log(x);
}

double relative_entropy(double p, double x, int order) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("relative_entropy: p must lie in (0,1)");
    switch (order) {
        case 0:
            if (!(x >= 0.0 && x <= 1.0))
                throw std::domain_error("relative_entropy: x must lie in [0,1]");
            if (x == 0.0) return std::log(1.0 / (1.0 - p));
            if (x == 1.0) return std::log(1.0 / p);
            return x * std::log(x / p) + (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
        case 1:
            if (!(x > 0.0 && x < 1.0))
                throw std::domain_error("relative_entropy: derivative needs x in (0,1)");
            return std::log(x * (1.0 - p) / (p * (1.0 - x)));
        case 2:
            if (!(x > 0.0 && x < 1.0))
                throw std::domain_error("relative_entropy: derivative needs x in (0,1)");
            return 1.0 / (x * (1.0 - x));
        default:
            throw std::invalid_argument("relative_entropy: order must be 0, 1 or 2");
    }
}

double sparse_entropy(double x, int order) {
    switch (order) {
        case 0:
            if (x < 0.0) throw std::domain_error("sparse_entropy: x must be >= 0");
            return xlogx(x) - x + 1.0;
        case 1:
            if (!(x > 0.0)) throw std::domain_error("sparse_entropy: derivative needs x > 0");
            return std::log(x);
        case 2:
            if (!(x > 0.0)) throw std::domain_error("sparse_entropy: derivative needs x > 0");
            return 1.0 / x;
        default:
            throw std::invalid_argument("sparse_entropy: order must be 0, 1 or 2");
    }
}

EntropyFn EntropyFn::finite(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("EntropyFn: p must lie in (0,1)");
    return EntropyFn(p);
}

EntropyFn EntropyFn::sparse() { return EntropyFn(std::nullopt); }

double EntropyFn::operator()(double x, int order) const {
    return p_ ? relative_entropy(*p_, x, order) : sparse_entropy(x, order);
}

double EntropyFn::p() const {
    if (!p_) throw std::logic_error("EntropyFn: sparse kind has no p");
    return *p_;
}

std::string EntropyFn::name() const {
    return p_ ? "I_p(p=" + format_double(*p_) + ")" : "h";
}

} // namespace lowtail
