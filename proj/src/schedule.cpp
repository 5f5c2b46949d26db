#include "cutplane/schedule.hpp"

#include <cmath>

#include "cutplane/errors.hpp"

namespace cutplane {

Schedule Schedule::zero() {
    Schedule s;
    s.kind_ = Kind::zero;
    s.current_ = 0.0;
    return s;
}

Schedule Schedule::geometric(double divisor, double eps0) {
    Schedule s;
    s.kind_ = Kind::geometric;
    s.divisor_ = divisor;
    s.current_ = eps0;
    return s;
}

Schedule Schedule::adaptive(double alpha_divisor) {
    Schedule s;
    s.kind_ = Kind::adaptive_residual;
    s.divisor_ = alpha_divisor;
    s.alpha_ = 1.0;
    s.current_ = std::numeric_limits<double>::infinity();
    return s;
}

std::optional<Schedule> Schedule::parse(std::string_view code, int n) {
    if (code == "a1") return zero();
    if (code == "a2") return geometric(1.1);
    if (code == "a3") return geometric(1.5);
    if (code == "a4") return geometric(2.0);
    if (code == "a5") return geometric(static_cast<double>(n));
    if (code == "a6") return adaptive(1.1);
    if (code == "a7") return adaptive(2.0);
    if (code == "c1") return geometric(1.1);
    if (code == "c2") return geometric(2.0);
    if (code == "c3") return geometric(static_cast<double>(n));
    if (code == "c4") return adaptive(2.0);
    return std::nullopt;
}

double Schedule::next_value(std::optional<double> context) {
    switch (kind_) {
        case Kind::zero:
            ++k_;
            current_ = 0.0;
            return current_;
        case Kind::geometric:
            current_ = current_ / divisor_;
            ++k_;
            return current_;
        case Kind::adaptive_residual: {
            if (!context.has_value()) throw MissingContext();
            current_ = alpha_ * *context;
            alpha_ /= divisor_;
            ++k_;
            return current_;
        }
    }
    return current_;
}

}  // namespace cutplane
