#include "adimc/esscher.hpp"

#include <cmath>
#include <stdexcept>

#include "adimc/normal.hpp"

namespace adimc {

double esscher_h_value(const EsscherModel& m, double theta, double x) {
    return m.f(x) * std::exp(-theta * x + m.psi(theta));
}

double esscher_sample(const EsscherModel& m, double theta, NormalStream& stream) {
    return m.tilted_quantile(theta, stream.next_uniform());
}

EsscherModel esscher_gaussian(std::function<double(double)> f) {
    EsscherModel m;
    m.f = std::move(f);
    m.psi = [](double theta) { return 0.5 * theta * theta; };
    m.tilted_quantile = [](double theta, double u) { return theta + normal_quantile(u); };
    m.name = "gaussian";
    return m;
}

EsscherModel esscher_exponential(double lambda, std::function<double(double)> f) {
    if (!(lambda > 0.0)) throw std::invalid_argument("exponential base needs lambda > 0");
    EsscherModel m;
    m.f = std::move(f);
    m.psi = [lambda](double theta) {
        if (!(theta < lambda)) throw std::domain_error("tilt parameter outside natural domain");
        return std::log(lambda / (lambda - theta));
    };
    m.tilted_quantile = [lambda](double theta, double u) {
        if (!(theta < lambda)) throw std::domain_error("tilt parameter outside natural domain");
        return -std::log(u) / (lambda - theta);
    };
    m.name = "exponential";
    return m;
}

}  // namespace adimc
