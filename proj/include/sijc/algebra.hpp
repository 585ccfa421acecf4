#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

// Shape-invariant potential families and their closed-form spectra: ladder
// parameter chains, remainder sequences, bound-state energies, and the
// dressed two-level eigenvalues E_m(±) = eps_{m+1} ± sqrt(hbar*Omega*eps_{m+1}).

namespace sijc {

struct Units {
    double hbar = 1.0;
};

struct HarmonicOscillator {
    double mass = 1.0;
    double omega = 1.0;
};

struct Morse {
    double v0 = 1.0;      // well depth
    double lambda = 1.0;  // inverse range
    double mass = 1.0;
};

// Abstract family given directly by its remainder sequence r1*q^(k-1);
// no closed-form superpotential, so grid operations reject it.
struct ScalingChain {
    double r1 = 1.0;
    double q = 0.5;
};

class PotentialFamily {
  public:
    static PotentialFamily harmonic(double mass, double omega, double hbar = 1.0) {
        if (!(hbar > 0.0)) throw InvalidFamily("hbar must be positive");
        if (!(mass > 0.0) || !(omega > 0.0))
            throw InvalidFamily("harmonic oscillator requires mass > 0 and omega > 0");
        return PotentialFamily(HarmonicOscillator{mass, omega}, Units{hbar});
    }

    static PotentialFamily morse(double v0, double lambda, double mass, double hbar = 1.0) {
        if (!(hbar > 0.0)) throw InvalidFamily("hbar must be positive");
        if (!(v0 > 0.0) || !(lambda > 0.0) || !(mass > 0.0))
            throw InvalidFamily("morse requires v0 > 0, lambda > 0, mass > 0");
        const double a1 = std::sqrt(v0) - hbar * lambda / (2.0 * std::sqrt(2.0 * mass));
        if (!(a1 > 0.0))
            throw InvalidFamily("morse well too shallow: sqrt(v0) must exceed "
                                "hbar*lambda/(2*sqrt(2*mass)) for a bound level");
        return PotentialFamily(Morse{v0, lambda, mass}, Units{hbar});
    }

    static PotentialFamily scaling(double r1, double q, double hbar = 1.0) {
        if (!(hbar > 0.0)) throw InvalidFamily("hbar must be positive");
        if (!(r1 > 0.0)) throw InvalidFamily("scaling chain requires r1 > 0");
        if (!(q > 0.0 && q < 1.0)) throw InvalidFamily("scaling chain requires 0 < q < 1");
        return PotentialFamily(ScalingChain{r1, q}, Units{hbar});
    }

    const std::variant<HarmonicOscillator, Morse, ScalingChain>& variant() const {
        return variant_;
    }
    const Units& units() const { return units_; }
    double hbar() const { return units_.hbar; }

    bool is_harmonic() const { return std::holds_alternative<HarmonicOscillator>(variant_); }
    bool is_morse() const { return std::holds_alternative<Morse>(variant_); }
    bool is_scaling() const { return std::holds_alternative<ScalingChain>(variant_); }

    const HarmonicOscillator& as_harmonic() const { return std::get<HarmonicOscillator>(variant_); }
    const Morse& as_morse() const { return std::get<Morse>(variant_); }
    const ScalingChain& as_scaling() const { return std::get<ScalingChain>(variant_); }

    std::string name() const {
        if (is_harmonic()) return "harmonic";
        if (is_morse()) return "morse";
        return "scaling";
    }

    bool grid_supported() const { return !is_scaling(); }

    // Morse ladder head a1 = sqrt(v0) - hbar*lambda/(2*sqrt(2*mass)) and
    // decrement step s = hbar*lambda/sqrt(2*mass).
    double morse_a1() const {
        const Morse& m = as_morse();
        return std::sqrt(m.v0) - units_.hbar * m.lambda / (2.0 * std::sqrt(2.0 * m.mass));
    }
    double morse_step() const {
        const Morse& m = as_morse();
        return units_.hbar * m.lambda / std::sqrt(2.0 * m.mass);
    }

  private:
    PotentialFamily(std::variant<HarmonicOscillator, Morse, ScalingChain> v, Units u)
        : variant_(std::move(v)), units_(u) {}

    std::variant<HarmonicOscillator, Morse, ScalingChain> variant_;
    Units units_;
};

enum class Branch { Minus, Plus };

struct EnergyLevel {
    int n = 0;
    double epsilon = 0.0;
};

struct ParameterChain {
    std::vector<double> values;  // a_1 .. a_{n+1}
};

// Number of excited bound levels; nullopt means unbounded.
inline std::optional<int> level_count(const PotentialFamily& family) {
    if (!family.is_morse()) return std::nullopt;
    const double a1 = family.morse_a1();
    const double s = family.morse_step();
    // largest n with a_{n+1} = a1 - n*s > 0
    int n = static_cast<int>(std::floor(a1 / s));
    while (a1 - static_cast<double>(n) * s <= 0.0) --n;
    while (a1 - static_cast<double>(n + 1) * s > 0.0) ++n;
    return n;
}

namespace detail {

inline void check_level_in_range(const PotentialFamily& family, int n, const char* what) {
    if (n < 0) throw LevelOutOfRange(std::string(what) + ": negative level index");
    if (const std::optional<int> cap = level_count(family); cap && n > *cap)
        throw LevelOutOfRange(std::string(what) + ": level " + std::to_string(n) +
                              " exceeds the " + std::to_string(*cap) +
                              " bound excited levels of this well");
}

}  // namespace detail

inline ParameterChain parameter_chain(const PotentialFamily& family, int n) {
    if (n < 0) throw LevelOutOfRange("parameter chain length must be nonnegative");
    ParameterChain chain;
    chain.values.reserve(static_cast<std::size_t>(n) + 1);
    if (family.is_harmonic()) {
        const HarmonicOscillator& ho = family.as_harmonic();
        // translation ladder: the parameter never changes
        const double a = std::sqrt(ho.mass / 2.0) * ho.omega;
        for (int k = 0; k <= n; ++k) chain.values.push_back(a);
    } else if (family.is_morse()) {
        const double s = family.morse_step();
        double a = family.morse_a1();
        for (int k = 0; k <= n; ++k) {
            chain.values.push_back(a);
            a -= s;
        }
    } else {
        // carried by q-powers of the remainder head
        const ScalingChain& sc = family.as_scaling();
        double r = sc.r1;
        for (int k = 0; k <= n; ++k) {
            chain.values.push_back(r);
            r *= sc.q;
        }
    }
    return chain;
}

// Ladder remainder at step k (k >= 1).
inline double remainder(const PotentialFamily& family, int k) {
    if (k < 1) throw LevelOutOfRange("remainder index starts at 1");
    if (family.is_harmonic()) {
        return family.hbar() * family.as_harmonic().omega;
    }
    if (family.is_morse()) {
        detail::check_level_in_range(family, k, "remainder");
        const double s = family.morse_step();
        const double ak = family.morse_a1() - static_cast<double>(k - 1) * s;
        const double ak1 = ak - s;
        return ak * ak - ak1 * ak1;
    }
    const ScalingChain& sc = family.as_scaling();
    return sc.r1 * std::pow(sc.q, static_cast<double>(k - 1));
}

inline EnergyLevel energy_level(const PotentialFamily& family, int n) {
    detail::check_level_in_range(family, n, "energy level");
    if (n == 0) return EnergyLevel{0, 0.0};
    double eps = 0.0;
    if (family.is_harmonic()) {
        eps = static_cast<double>(n) * family.hbar() * family.as_harmonic().omega;
    } else if (family.is_morse()) {
        const double a1 = family.morse_a1();
        const double an1 = a1 - static_cast<double>(n) * family.morse_step();
        eps = a1 * a1 - an1 * an1;
    } else {
        const ScalingChain& sc = family.as_scaling();
        eps = sc.r1 * (1.0 - std::pow(sc.q, static_cast<double>(n))) / (1.0 - sc.q);
    }
    return EnergyLevel{n, eps};
}

// Dressed eigenvalue E_m(±) for pair index m >= 0; the uncoupled ground
// level is reported separately as exactly 0 and is not addressed here.
inline double jc_eigenvalue(const PotentialFamily& family, double omega_drive, int m,
                            Branch branch) {
    if (omega_drive < 0.0) throw NegativeDriveStrength("drive strength must be nonnegative");
    if (m < 0) throw LevelOutOfRange("pair index must be nonnegative");
    const double eps = energy_level(family, m + 1).epsilon;
    const double rabi = std::sqrt(family.hbar() * omega_drive * eps);
    return branch == Branch::Plus ? eps + rabi : eps - rabi;
}

// Morse dressed eigenvalue evaluated through the explicit well-depth form
// sqrt(v0)*s*(m+1)*(2 - (s/sqrt(v0))*(m+2)) with s = hbar*lambda/sqrt(2*mass);
// algebraically identical to jc_eigenvalue on Morse inputs.
inline double morse_closed_form(const PotentialFamily& family, double omega_drive, int m,
                                Branch branch) {
    if (!family.is_morse()) throw UnsupportedFamily("closed form is specific to the morse well");
    if (omega_drive < 0.0) throw NegativeDriveStrength("drive strength must be nonnegative");
    if (m < 0) throw LevelOutOfRange("pair index must be nonnegative");
    detail::check_level_in_range(family, m + 1, "closed-form level");
    const Morse& mo = family.as_morse();
    const double s = family.morse_step();
    const double root_v0 = std::sqrt(mo.v0);
    const double eps = root_v0 * s * static_cast<double>(m + 1) *
                       (2.0 - (s / root_v0) * static_cast<double>(m + 2));
    const double rabi = std::sqrt(family.hbar() * omega_drive * eps);
    return branch == Branch::Plus ? eps + rabi : eps - rabi;
}

// Superpotential at ladder parameter a_k.
inline double superpotential(const PotentialFamily& family, int k, double x) {
    if (k < 1) throw LevelOutOfRange("parameter index starts at 1");
    if (family.is_harmonic()) {
        const HarmonicOscillator& ho = family.as_harmonic();
        return std::sqrt(ho.mass / 2.0) * ho.omega * x;
    }
    if (family.is_morse()) {
        const Morse& mo = family.as_morse();
        const double ak = family.morse_a1() - static_cast<double>(k - 1) * family.morse_step();
        return ak - std::sqrt(mo.v0) * std::exp(-mo.lambda * x);
    }
    throw UnsupportedFamily("scaling chain has no closed-form superpotential");
}

// dW/dx at ladder parameter a_k, evaluated analytically.
inline double superpotential_derivative(const PotentialFamily& family, int k, double x) {
    if (k < 1) throw LevelOutOfRange("parameter index starts at 1");
    if (family.is_harmonic()) {
        const HarmonicOscillator& ho = family.as_harmonic();
        return std::sqrt(ho.mass / 2.0) * ho.omega;
    }
    if (family.is_morse()) {
        const Morse& mo = family.as_morse();
        return mo.lambda * std::sqrt(mo.v0) * std::exp(-mo.lambda * x);
    }
    throw UnsupportedFamily("scaling chain has no closed-form superpotential");
}

struct SpectrumRow {
    int m = 0;
    double epsilon = 0.0;
    double e_minus = 0.0;
    double e_plus = 0.0;
};

struct SpectrumTable {
    PotentialFamily family;
    double omega_drive = 0.0;
    double ground = 0.0;  // the uncoupled level, exactly 0
    std::vector<SpectrumRow> levels;
};

inline SpectrumTable spectrum_table(const PotentialFamily& family, double omega_drive,
                                    int n_levels) {
    if (omega_drive < 0.0) throw NegativeDriveStrength("drive strength must be nonnegative");
    if (n_levels < 0) throw LevelOutOfRange("level count must be nonnegative");
    SpectrumTable table{family, omega_drive, 0.0, {}};
    table.levels.reserve(static_cast<std::size_t>(n_levels));
    for (int m = 0; m < n_levels; ++m) {
        const double eps = energy_level(family, m + 1).epsilon;
        const double rabi = std::sqrt(family.hbar() * omega_drive * eps);
        table.levels.push_back(SpectrumRow{m, eps, eps - rabi, eps + rabi});
    }
    return table;
}

}  // namespace sijc
