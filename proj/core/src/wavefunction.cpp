#include "jostlab/wavefunction.hpp"

#include "jostlab/error.hpp"

#include <cmath>

namespace jostlab {

std::string InitialState::kind_name() const {
    switch (kind) {
        case Kind::gaussian: return "gaussian";
        case Kind::odd_gaussian: return "odd_gaussian";
        case Kind::lorentzian: return "lorentzian";
    }
    return "gaussian";
}

InitialState::Kind InitialState::kind_from_name(const std::string& name) {
    if (name == "gaussian") return Kind::gaussian;
    if (name == "odd_gaussian") return Kind::odd_gaussian;
    if (name == "lorentzian") return Kind::lorentzian;
    throw InvalidArgument("unknown initial_state kind '" + name + "'");
}

ComplexArray InitialState::sample(const SpatialGrid& grid) const {
    if (!(width > 0.0)) throw InvalidArgument("initial_state width must be > 0");
    ComplexArray psi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = (grid.x(i) - center) / width;
        switch (kind) {
            case Kind::gaussian: psi[i] = std::exp(-0.5 * u * u); break;
            case Kind::odd_gaussian: psi[i] = u * std::exp(-0.5 * u * u); break;
            case Kind::lorentzian: psi[i] = 1.0 / (1.0 + u * u); break;
        }
    }
    return psi;
}

}  // namespace jostlab
