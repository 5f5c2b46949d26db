#pragma once

#include <limits>
#include <optional>
#include <string_view>

namespace cutplane {

// Quality-threshold sequences eps_k / delta_k controlling refresh
// frequency. Codes follow the experiment tables:
//   a1 zero; a2 /1.1; a3 /1.5; a4 /2; a5 /n; a6 adaptive 1/1.1^k;
//   a7 adaptive 1/2^k; c1 /1.1; c2 /2; c3 /n; c4 adaptive gap 1/2^k.
class Schedule {
  public:
    enum class Kind { zero, geometric, adaptive_residual };

    static Schedule zero();
    static Schedule geometric(double divisor, double eps0 = 1.0);
    // Starts at the +inf sentinel so the first iterate always refreshes.
    static Schedule adaptive(double alpha_divisor);

    // a1..a7 / c1..c4; n supplies the a5/c3 divisor. Unknown code -> nullopt.
    static std::optional<Schedule> parse(std::string_view code, int n);

    Kind kind() const { return kind_; }
    double current() const { return current_; }
    int k() const { return k_; }

    // Advances k and returns eps_{k+1}. Adaptive kinds require the residual
    // context (F(x_k) or the gap f(x_k) - sigma_k) and throw MissingContext
    // without it.
    double next_value(std::optional<double> context = std::nullopt);

  private:
    Kind kind_ = Kind::zero;
    double divisor_ = 2.0;
    double alpha_ = 1.0;  // adaptive: current 1/divisor^k
    double current_ = 0.0;
    int k_ = 0;
};

}  // namespace cutplane
