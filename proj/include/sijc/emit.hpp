#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "dressed.hpp"
#include "errors.hpp"
#include "grid.hpp"

// Deterministic text emission. Every number is rendered through the same
// 12-significant-digit path so that identical runs produce byte-identical
// output in all three formats (table, json, csv).

namespace sijc::emit {

inline std::string format_real(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in emission");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

inline std::string format_int(long long v) { return std::to_string(v); }

inline std::string format_bool(bool v) { return v ? "true" : "false"; }

namespace detail {

inline std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

inline std::string family_inline(const PotentialFamily& f) {
    if (f.is_harmonic()) {
        const HarmonicOscillator& ho = f.as_harmonic();
        return "harmonic (mass=" + format_real(ho.mass) + ", omega=" + format_real(ho.omega) + ")";
    }
    if (f.is_morse()) {
        const Morse& mo = f.as_morse();
        return "morse (v0=" + format_real(mo.v0) + ", lambda=" + format_real(mo.lambda) +
               ", mass=" + format_real(mo.mass) + ")";
    }
    const ScalingChain& sc = f.as_scaling();
    return "scaling (r1=" + format_real(sc.r1) + ", q=" + format_real(sc.q) + ")";
}

// family object with a fixed key order, indented by `pad` spaces
inline std::string family_json(const PotentialFamily& f, const std::string& pad) {
    std::string out = "{\n";
    const std::string inner = pad + "  ";
    out += inner + "\"name\": \"" + f.name() + "\",\n";
    if (f.is_harmonic()) {
        const HarmonicOscillator& ho = f.as_harmonic();
        out += inner + "\"mass\": " + format_real(ho.mass) + ",\n";
        out += inner + "\"omega\": " + format_real(ho.omega) + "\n";
    } else if (f.is_morse()) {
        const Morse& mo = f.as_morse();
        out += inner + "\"v0\": " + format_real(mo.v0) + ",\n";
        out += inner + "\"lambda\": " + format_real(mo.lambda) + ",\n";
        out += inner + "\"mass\": " + format_real(mo.mass) + "\n";
    } else {
        const ScalingChain& sc = f.as_scaling();
        out += inner + "\"r1\": " + format_real(sc.r1) + ",\n";
        out += inner + "\"q\": " + format_real(sc.q) + "\n";
    }
    out += pad + "}";
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------- families

inline std::string families_table() {
    std::string out;
    out += detail::pad_right("name", 10) + detail::pad_right("parameters", 18) +
           detail::pad_right("grid_supported", 16) + "note\n";
    out += detail::pad_right("harmonic", 10) + detail::pad_right("mass, omega", 18) +
           detail::pad_right("yes", 16) + "-\n";
    out += detail::pad_right("morse", 10) + detail::pad_right("v0, lambda, mass", 18) +
           detail::pad_right("yes", 16) + "-\n";
    out += detail::pad_right("scaling", 10) + detail::pad_right("r1, q", 18) +
           detail::pad_right("no", 16) + "analytic-only\n";
    return out;
}

inline std::string families_json() {
    return "{\n"
           "  \"families\": [\n"
           "    {\n"
           "      \"name\": \"harmonic\",\n"
           "      \"parameters\": [\"mass\", \"omega\"],\n"
           "      \"grid_supported\": true\n"
           "    },\n"
           "    {\n"
           "      \"name\": \"morse\",\n"
           "      \"parameters\": [\"v0\", \"lambda\", \"mass\"],\n"
           "      \"grid_supported\": true\n"
           "    },\n"
           "    {\n"
           "      \"name\": \"scaling\",\n"
           "      \"parameters\": [\"r1\", \"q\"],\n"
           "      \"grid_supported\": false,\n"
           "      \"note\": \"analytic-only\"\n"
           "    }\n"
           "  ]\n"
           "}\n";
}

inline std::string families_csv() {
    return "name,grid_supported,parameters\n"
           "harmonic,true,mass;omega\n"
           "morse,true,v0;lambda;mass\n"
           "scaling,false,r1;q\n";
}

// ---------------------------------------------------------------- spectrum

inline std::string spectrum_table_text(const SpectrumTable& t) {
    std::string out;
    out += "family: " + detail::family_inline(t.family) + "\n";
    out += "hbar: " + format_real(t.family.hbar()) + "\n";
    out += "omega_drive: " + format_real(t.omega_drive) + "\n";
    out += "ground: " + format_real(t.ground) + "\n";
    out += detail::pad_left("m", 4) + detail::pad_left("epsilon", 22) +
           detail::pad_left("e_minus", 22) + detail::pad_left("e_plus", 22) + "\n";
    for (const SpectrumRow& row : t.levels) {
        out += detail::pad_left(format_int(row.m), 4) +
               detail::pad_left(format_real(row.epsilon), 22) +
               detail::pad_left(format_real(row.e_minus), 22) +
               detail::pad_left(format_real(row.e_plus), 22) + "\n";
    }
    return out;
}

inline std::string spectrum_json(const SpectrumTable& t) {
    std::string out = "{\n";
    out += "  \"family\": " + detail::family_json(t.family, "  ") + ",\n";
    out += "  \"hbar\": " + format_real(t.family.hbar()) + ",\n";
    out += "  \"omega_drive\": " + format_real(t.omega_drive) + ",\n";
    out += "  \"ground\": " + format_real(t.ground) + ",\n";
    out += "  \"levels\": [";
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
        const SpectrumRow& row = t.levels[i];
        out += (i == 0 ? "\n" : ",\n");
        out += "    {\n";
        out += "      \"m\": " + format_int(row.m) + ",\n";
        out += "      \"epsilon\": " + format_real(row.epsilon) + ",\n";
        out += "      \"e_minus\": " + format_real(row.e_minus) + ",\n";
        out += "      \"e_plus\": " + format_real(row.e_plus) + "\n";
        out += "    }";
    }
    out += t.levels.empty() ? "]\n" : "\n  ]\n";
    out += "}\n";
    return out;
}

// The uncoupled ground level is always exactly 0 and is not repeated in the
// csv rows; consumers get it from the schema.
inline std::string spectrum_csv(const SpectrumTable& t) {
    std::string out = "m,epsilon,e_minus,e_plus\n";
    for (const SpectrumRow& row : t.levels) {
        out += format_int(row.m) + "," + format_real(row.epsilon) + "," +
               format_real(row.e_minus) + "," + format_real(row.e_plus) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------- dressed

struct DressedEmission {
    PotentialFamily family;
    double omega_drive = 0.0;
    int n_max = 0;
    dressed::DressedMatrix h;
    dressed::DressedSpectrum spectrum;
};

inline std::string dressed_table(const DressedEmission& d) {
    std::string out;
    out += "family: " + detail::family_inline(d.family) + "\n";
    out += "hbar: " + format_real(d.family.hbar()) + "\n";
    out += "omega_drive: " + format_real(d.omega_drive) + "\n";
    out += "n_max: " + format_int(d.n_max) + "\n";
    out += "basis:";
    for (const std::string& label : d.h.labels) out += " " + label;
    out += "\n";
    out += "blocks:\n";
    out += "  ground: [" + format_real(d.h.at(0, 0)) + "]\n";
    for (int m = 0; m <= d.n_max; ++m) {
        const std::size_t iu = dressed::DressedBasis::index_u(m);
        const std::size_t iv = dressed::DressedBasis::index_v(m + 1);
        out += "  m=" + format_int(m) + ": epsilon=" + format_real(d.h.at(iu, iu)) +
               " coupling=" + format_real(d.h.at(iu, iv)) + "\n";
    }
    out += "spectrum:\n";
    out += "  ground: " + format_real(d.spectrum.ground) + "\n";
    for (const SpectrumRow& row : d.spectrum.levels) {
        out += "  m=" + format_int(row.m) + ": e_minus=" + format_real(row.e_minus) +
               " e_plus=" + format_real(row.e_plus) + "\n";
    }
    out += "max_deviation: " + format_real(d.spectrum.max_abs_deviation) + "\n";
    return out;
}

inline std::string dressed_json(const DressedEmission& d) {
    std::string out = "{\n";
    out += "  \"family\": " + detail::family_json(d.family, "  ") + ",\n";
    out += "  \"hbar\": " + format_real(d.family.hbar()) + ",\n";
    out += "  \"omega_drive\": " + format_real(d.omega_drive) + ",\n";
    out += "  \"n_max\": " + format_int(d.n_max) + ",\n";
    out += "  \"basis\": [";
    for (std::size_t i = 0; i < d.h.labels.size(); ++i)
        out += (i == 0 ? "\"" : ", \"") + d.h.labels[i] + "\"";
    out += "],\n";
    out += "  \"blocks\": [\n";
    out += "    {\n      \"label\": \"ground\",\n      \"epsilon\": " + format_real(d.h.at(0, 0)) +
           ",\n      \"coupling\": 0\n    }";
    for (int m = 0; m <= d.n_max; ++m) {
        const std::size_t iu = dressed::DressedBasis::index_u(m);
        const std::size_t iv = dressed::DressedBasis::index_v(m + 1);
        out += ",\n    {\n";
        out += "      \"m\": " + format_int(m) + ",\n";
        out += "      \"epsilon\": " + format_real(d.h.at(iu, iu)) + ",\n";
        out += "      \"coupling\": " + format_real(d.h.at(iu, iv)) + "\n";
        out += "    }";
    }
    out += "\n  ],\n";
    out += "  \"spectrum\": {\n";
    out += "    \"ground\": " + format_real(d.spectrum.ground) + ",\n";
    out += "    \"levels\": [";
    for (std::size_t i = 0; i < d.spectrum.levels.size(); ++i) {
        const SpectrumRow& row = d.spectrum.levels[i];
        out += (i == 0 ? "\n" : ",\n");
        out += "      {\n";
        out += "        \"m\": " + format_int(row.m) + ",\n";
        out += "        \"e_minus\": " + format_real(row.e_minus) + ",\n";
        out += "        \"e_plus\": " + format_real(row.e_plus) + "\n";
        out += "      }";
    }
    out += d.spectrum.levels.empty() ? "]\n" : "\n    ]\n";
    out += "  },\n";
    out += "  \"max_deviation\": " + format_real(d.spectrum.max_abs_deviation) + "\n";
    out += "}\n";
    return out;
}

inline std::string dressed_csv(const DressedEmission& d) {
    std::string out = "m,e_minus,e_plus\n";
    for (const SpectrumRow& row : d.spectrum.levels)
        out += format_int(row.m) + "," + format_real(row.e_minus) + "," +
               format_real(row.e_plus) + "\n";
    return out;
}

// ---------------------------------------------------------------- verify

struct VerifyEmission {
    grid::VerificationReport report;
    double tolerance = 1e-3;
    bool pass = true;
    std::optional<std::vector<grid::ConvergenceRow>> study;
};

inline std::string verify_table(const VerifyEmission& v) {
    const grid::VerificationReport& r = v.report;
    std::string out;
    out += "family: " + detail::family_inline(r.family) + "\n";
    out += "hbar: " + format_real(r.family.hbar()) + "\n";
    out += "omega_drive: " + format_real(r.omega_drive) + "\n";
    out += "grid: x_min=" + format_real(r.grid.x_min) + " x_max=" + format_real(r.grid.x_max) +
           " n_points=" + format_int(r.grid.n_points) + " h=" + format_real(r.grid.spacing()) +
           "\n";
    out += detail::pad_right("level", 8) + detail::pad_left("analytic", 20) +
           detail::pad_left("numeric", 20) + detail::pad_left("abs_error", 20) +
           detail::pad_left("rel_error", 20) + "\n";
    for (const grid::LevelComparison& lc : r.levels) {
        out += detail::pad_right(lc.label, 8) + detail::pad_left(format_real(lc.analytic), 20) +
               detail::pad_left(format_real(lc.numeric), 20) +
               detail::pad_left(format_real(lc.abs_error), 20) +
               detail::pad_left(format_real(lc.rel_error), 20) + "\n";
    }
    out += "ground_leakage: " + format_real(r.ground_leakage) + "\n";
    out += "convergence_ratio: " + format_real(r.convergence_ratio) + "\n";
    if (v.study) {
        out += "convergence:\n";
        out += detail::pad_left("n_points", 10) + detail::pad_left("h", 20) +
               detail::pad_left("max_rel_error", 20) + detail::pad_left("order", 20) + "\n";
        for (const grid::ConvergenceRow& row : *v.study) {
            out += detail::pad_left(format_int(row.n_points), 10) +
                   detail::pad_left(format_real(row.h), 20) +
                   detail::pad_left(format_real(row.max_rel_error), 20) +
                   detail::pad_left(row.order ? format_real(*row.order) : "-", 20) + "\n";
        }
    }
    out += "tolerance: " + format_real(v.tolerance) + "\n";
    out += std::string("result: ") + (v.pass ? "pass" : "fail") + "\n";
    return out;
}

inline std::string verify_json(const VerifyEmission& v) {
    const grid::VerificationReport& r = v.report;
    std::string out = "{\n";
    out += "  \"family\": " + detail::family_json(r.family, "  ") + ",\n";
    out += "  \"hbar\": " + format_real(r.family.hbar()) + ",\n";
    out += "  \"omega_drive\": " + format_real(r.omega_drive) + ",\n";
    out += "  \"grid\": {\n";
    out += "    \"x_min\": " + format_real(r.grid.x_min) + ",\n";
    out += "    \"x_max\": " + format_real(r.grid.x_max) + ",\n";
    out += "    \"n_points\": " + format_int(r.grid.n_points) + ",\n";
    out += "    \"h\": " + format_real(r.grid.spacing()) + "\n";
    out += "  },\n";
    out += "  \"levels\": [";
    for (std::size_t i = 0; i < r.levels.size(); ++i) {
        const grid::LevelComparison& lc = r.levels[i];
        out += (i == 0 ? "\n" : ",\n");
        out += "    {\n";
        out += "      \"label\": \"" + lc.label + "\",\n";
        out += "      \"analytic\": " + format_real(lc.analytic) + ",\n";
        out += "      \"numeric\": " + format_real(lc.numeric) + ",\n";
        out += "      \"abs_error\": " + format_real(lc.abs_error) + ",\n";
        out += "      \"rel_error\": " + format_real(lc.rel_error) + "\n";
        out += "    }";
    }
    out += r.levels.empty() ? "],\n" : "\n  ],\n";
    out += "  \"ground_leakage\": " + format_real(r.ground_leakage) + ",\n";
    out += "  \"convergence_ratio\": " + format_real(r.convergence_ratio) + ",\n";
    if (v.study) {
        out += "  \"convergence\": [";
        for (std::size_t i = 0; i < v.study->size(); ++i) {
            const grid::ConvergenceRow& row = (*v.study)[i];
            out += (i == 0 ? "\n" : ",\n");
            out += "    {\n";
            out += "      \"n_points\": " + format_int(row.n_points) + ",\n";
            out += "      \"h\": " + format_real(row.h) + ",\n";
            out += "      \"max_rel_error\": " + format_real(row.max_rel_error) + ",\n";
            out += "      \"order\": " + (row.order ? format_real(*row.order) : "null") + "\n";
            out += "    }";
        }
        out += v.study->empty() ? "],\n" : "\n  ],\n";
    }
    out += "  \"tolerance\": " + format_real(v.tolerance) + ",\n";
    out += "  \"pass\": " + format_bool(v.pass) + "\n";
    out += "}\n";
    return out;
}

inline std::string verify_csv(const VerifyEmission& v) {
    std::string out = "label,analytic,numeric,abs_error,rel_error\n";
    for (const grid::LevelComparison& lc : v.report.levels) {
        out += lc.label + "," + format_real(lc.analytic) + "," + format_real(lc.numeric) + "," +
               format_real(lc.abs_error) + "," + format_real(lc.rel_error) + "\n";
    }
    if (v.study) {
        out += "\nn_points,h,max_rel_error,order\n";
        for (const grid::ConvergenceRow& row : *v.study) {
            out += format_int(row.n_points) + "," + format_real(row.h) + "," +
                   format_real(row.max_rel_error) + "," +
                   (row.order ? format_real(*row.order) : "") + "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------- residual

struct ResidualEmission {
    PotentialFamily family;
    grid::GridSpec coarse;
    grid::GridSpec fine;
    double coarse_residual = 0.0;
    double fine_residual = 0.0;
    double ratio = 0.0;
    double remainder_offset = 0.0;
    bool pass = true;
};

inline std::string residual_table(const ResidualEmission& e) {
    std::string out;
    out += "family: " + detail::family_inline(e.family) + "\n";
    out += "hbar: " + format_real(e.family.hbar()) + "\n";
    out += "grid: x_min=" + format_real(e.coarse.x_min) + " x_max=" + format_real(e.coarse.x_max) +
           "\n";
    if (e.remainder_offset != 0.0)
        out += "remainder_offset: " + format_real(e.remainder_offset) + "\n";
    out += "coarse: n_points=" + format_int(e.coarse.n_points) +
           " h=" + format_real(e.coarse.spacing()) + " residual=" + format_real(e.coarse_residual) +
           "\n";
    out += "fine: n_points=" + format_int(e.fine.n_points) +
           " h=" + format_real(e.fine.spacing()) + " residual=" + format_real(e.fine_residual) +
           "\n";
    out += "ratio: " + format_real(e.ratio) + "\n";
    out += std::string("result: ") + (e.pass ? "pass" : "fail") + "\n";
    return out;
}

inline std::string residual_json(const ResidualEmission& e) {
    std::string out = "{\n";
    out += "  \"family\": " + detail::family_json(e.family, "  ") + ",\n";
    out += "  \"hbar\": " + format_real(e.family.hbar()) + ",\n";
    out += "  \"remainder_offset\": " + format_real(e.remainder_offset) + ",\n";
    out += "  \"coarse\": {\n";
    out += "    \"n_points\": " + format_int(e.coarse.n_points) + ",\n";
    out += "    \"h\": " + format_real(e.coarse.spacing()) + ",\n";
    out += "    \"residual\": " + format_real(e.coarse_residual) + "\n";
    out += "  },\n";
    out += "  \"fine\": {\n";
    out += "    \"n_points\": " + format_int(e.fine.n_points) + ",\n";
    out += "    \"h\": " + format_real(e.fine.spacing()) + ",\n";
    out += "    \"residual\": " + format_real(e.fine_residual) + "\n";
    out += "  },\n";
    out += "  \"ratio\": " + format_real(e.ratio) + ",\n";
    out += "  \"pass\": " + format_bool(e.pass) + "\n";
    out += "}\n";
    return out;
}

inline std::string residual_csv(const ResidualEmission& e) {
    std::string out = "n_points,h,residual\n";
    out += format_int(e.coarse.n_points) + "," + format_real(e.coarse.spacing()) + "," +
           format_real(e.coarse_residual) + "\n";
    out += format_int(e.fine.n_points) + "," + format_real(e.fine.spacing()) + "," +
           format_real(e.fine_residual) + "\n";
    return out;
}

// ----------------------------------------------------- eigenvector dump

inline std::string states_csv(const grid::GridSpec& grid, const std::vector<grid::GridState>& states) {
    std::string out = "x,channel";
    for (std::size_t j = 0; j < states.size(); ++j) out += ",psi_" + std::to_string(j);
    out += "\n";
    for (int i = 0; i < grid.n_points; ++i) {
        for (int ch = 0; ch < 2; ++ch) {
            out += format_real(grid.point(i)) + "," + format_int(ch);
            for (const grid::GridState& st : states)
                out += "," + format_real(st.amplitudes[2 * static_cast<std::size_t>(i) +
                                                       static_cast<std::size_t>(ch)]);
            out += "\n";
        }
    }
    return out;
}

}  // namespace sijc::emit
