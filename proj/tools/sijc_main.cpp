#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sijc/algebra.hpp"
#include "sijc/dressed.hpp"
#include "sijc/emit.hpp"
#include "sijc/errors.hpp"
#include "sijc/grid.hpp"

namespace {

struct FamilyArgs {
    std::string name;
    double mass = 0.0, omega = 0.0;
    double v0 = 0.0, lambda = 0.0;
    double r1 = 0.0, q = 0.0;
    double hbar = 1.0;
    CLI::Option* o_mass = nullptr;
    CLI::Option* o_omega = nullptr;
    CLI::Option* o_v0 = nullptr;
    CLI::Option* o_lambda = nullptr;
    CLI::Option* o_r1 = nullptr;
    CLI::Option* o_q = nullptr;
};

struct OutputArgs {
    std::string format = "table";
    std::string output;
};

struct GridArgs {
    double x_min = 0.0, x_max = 0.0;
    int n_points = 0;
    CLI::Option* o_x_min = nullptr;
    CLI::Option* o_x_max = nullptr;
    CLI::Option* o_n_points = nullptr;
};

void add_family_options(CLI::App* sub, FamilyArgs& fa) {
    sub->add_option("--family", fa.name, "potential family: harmonic, morse or scaling")
        ->required();
    fa.o_mass = sub->add_option("--mass", fa.mass, "particle mass (harmonic, morse)");
    fa.o_omega = sub->add_option("--omega", fa.omega, "oscillator frequency (harmonic)");
    fa.o_v0 = sub->add_option("--v0", fa.v0, "well depth (morse)");
    fa.o_lambda = sub->add_option("--lambda", fa.lambda, "inverse range (morse)");
    fa.o_r1 = sub->add_option("--r1", fa.r1, "first remainder (scaling)");
    fa.o_q = sub->add_option("--q", fa.q, "scale factor in (0,1) (scaling)");
    sub->add_option("--hbar", fa.hbar, "value of hbar")->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* sub, OutputArgs& oa) {
    sub->add_option("--format", oa.format, "output format")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    sub->add_option("--output", oa.output, "write output to this file as well as stdout");
}

void add_grid_options(CLI::App* sub, GridArgs& ga) {
    ga.o_x_min = sub->add_option("--x-min", ga.x_min, "left edge of the grid");
    ga.o_x_max = sub->add_option("--x-max", ga.x_max, "right edge of the grid");
    ga.o_n_points = sub->add_option("--n-points", ga.n_points, "interior grid points");
}

// Parameter completeness is a usage problem, so it is reported before any
// computation and maps to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(const CLI::Option* opt, const char* flag, const std::string& family) {
    if (opt->count() == 0)
        throw UsageError("--family " + family + " requires " + flag);
}

void forbid(const CLI::Option* opt, const char* flag, const std::string& family) {
    if (opt->count() > 0)
        throw UsageError(std::string(flag) + " does not apply to --family " + family);
}

sijc::PotentialFamily build_family(const FamilyArgs& fa) {
    if (fa.name == "harmonic") {
        require(fa.o_mass, "--mass", fa.name);
        require(fa.o_omega, "--omega", fa.name);
        forbid(fa.o_v0, "--v0", fa.name);
        forbid(fa.o_lambda, "--lambda", fa.name);
        forbid(fa.o_r1, "--r1", fa.name);
        forbid(fa.o_q, "--q", fa.name);
        return sijc::PotentialFamily::harmonic(fa.mass, fa.omega, fa.hbar);
    }
    if (fa.name == "morse") {
        require(fa.o_v0, "--v0", fa.name);
        require(fa.o_lambda, "--lambda", fa.name);
        require(fa.o_mass, "--mass", fa.name);
        forbid(fa.o_omega, "--omega", fa.name);
        forbid(fa.o_r1, "--r1", fa.name);
        forbid(fa.o_q, "--q", fa.name);
        return sijc::PotentialFamily::morse(fa.v0, fa.lambda, fa.mass, fa.hbar);
    }
    if (fa.name == "scaling") {
        require(fa.o_r1, "--r1", fa.name);
        require(fa.o_q, "--q", fa.name);
        forbid(fa.o_mass, "--mass", fa.name);
        forbid(fa.o_omega, "--omega", fa.name);
        forbid(fa.o_v0, "--v0", fa.name);
        forbid(fa.o_lambda, "--lambda", fa.name);
        return sijc::PotentialFamily::scaling(fa.r1, fa.q, fa.hbar);
    }
    throw sijc::InvalidFamily("unknown family \"" + fa.name +
                              "\"; expected harmonic, morse or scaling");
}

sijc::grid::GridSpec resolve_grid(const sijc::PotentialFamily& family, const GridArgs& ga,
                                  int n_levels) {
    sijc::grid::GridSpec spec = sijc::grid::default_grid(family, n_levels);
    if (ga.o_x_min->count() > 0) spec.x_min = ga.x_min;
    if (ga.o_x_max->count() > 0) spec.x_max = ga.x_max;
    if (ga.o_n_points->count() > 0) spec.n_points = ga.n_points;
    spec.validate();
    return spec;
}

void write_out(const std::string& text, const OutputArgs& oa) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (!oa.output.empty()) {
        std::ofstream f(oa.output, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + oa.output);
        f << text;
    }
}

const std::string& pick(const OutputArgs& oa, const std::string& table, const std::string& json,
                        const std::string& csv) {
    if (oa.format == "json") return json;
    if (oa.format == "csv") return csv;
    return table;
}

// ----------------------------------------------------------------- commands

int run_families(const OutputArgs& oa) {
    write_out(pick(oa, sijc::emit::families_table(), sijc::emit::families_json(),
                   sijc::emit::families_csv()),
              oa);
    return 0;
}

int run_spectrum(const FamilyArgs& fa, double omega_drive, int levels, const OutputArgs& oa) {
    const sijc::PotentialFamily family = build_family(fa);
    const sijc::SpectrumTable table = sijc::spectrum_table(family, omega_drive, levels);
    write_out(pick(oa, sijc::emit::spectrum_table_text(table), sijc::emit::spectrum_json(table),
                   sijc::emit::spectrum_csv(table)),
              oa);
    return 0;
}

int run_dressed(const FamilyArgs& fa, double omega_drive, int n_max, const OutputArgs& oa) {
    const sijc::PotentialFamily family = build_family(fa);
    sijc::emit::DressedEmission em{family, omega_drive, n_max,
                                   sijc::dressed::h_matrix(family, omega_drive, n_max),
                                   sijc::dressed::diagonalize_dressed(family, omega_drive, n_max)};
    write_out(pick(oa, sijc::emit::dressed_table(em), sijc::emit::dressed_json(em),
                   sijc::emit::dressed_csv(em)),
              oa);
    return em.spectrum.max_abs_deviation <= 1e-9 ? 0 : 4;
}

int run_verify(const FamilyArgs& fa, double omega_drive, int levels, const GridArgs& ga,
               double tolerance, bool converge, int dump_states, const std::string& dump_path,
               const OutputArgs& oa) {
    const sijc::PotentialFamily family = build_family(fa);
    const sijc::grid::GridSpec grid = resolve_grid(family, ga, levels);
    sijc::emit::VerifyEmission em{sijc::grid::verify_spectrum(family, omega_drive, grid, levels),
                                  tolerance, true, std::nullopt};
    for (const sijc::grid::LevelComparison& lc : em.report.levels)
        if (lc.rel_error > tolerance) em.pass = false;
    if (converge)
        em.study = sijc::grid::convergence_study(family, omega_drive, grid, levels);
    if (dump_states > 0) {
        const std::vector<sijc::grid::GridState> states =
            sijc::grid::lowest_states(family, omega_drive, grid, dump_states);
        std::ofstream f(dump_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open dump file " + dump_path);
        f << sijc::emit::states_csv(grid, states);
    }
    write_out(pick(oa, sijc::emit::verify_table(em), sijc::emit::verify_json(em),
                   sijc::emit::verify_csv(em)),
              oa);
    return em.pass ? 0 : 4;
}

int run_residual(const FamilyArgs& fa, const GridArgs& ga, bool break_remainder,
                 const OutputArgs& oa) {
    const sijc::PotentialFamily family = build_family(fa);
    const sijc::grid::GridSpec coarse = resolve_grid(family, ga, 5);
    sijc::grid::GridSpec fine = coarse;
    fine.n_points = 2 * coarse.n_points + 1;  // halves the spacing exactly
    const double offset = break_remainder ? 1.0 : 0.0;
    const double rc = sijc::grid::shape_invariance_residual(family, coarse, offset);
    const double rf = sijc::grid::shape_invariance_residual(family, fine, offset);
    const double ratio = rf > 0.0 ? rc / rf : 0.0;
    sijc::emit::ResidualEmission em{family, coarse, fine, rc, rf, ratio, offset,
                                    ratio >= 3.0 && ratio <= 5.0};
    write_out(pick(oa, sijc::emit::residual_table(em), sijc::emit::residual_json(em),
                   sijc::emit::residual_csv(em)),
              oa);
    return em.pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shape-invariant ladder spectra with an exactly solvable two-channel coupling"};
    app.require_subcommand(1);

    OutputArgs fam_out;
    double fam_hbar = 1.0;
    CLI::App* cmd_families = app.add_subcommand("families", "list the supported potential families");
    cmd_families->add_option("--hbar", fam_hbar, "value of hbar (listing does not depend on it)")
        ->check(CLI::PositiveNumber);
    add_output_options(cmd_families, fam_out);

    FamilyArgs sp_fa;
    OutputArgs sp_out;
    double sp_omega = 0.0;
    int sp_levels = 4;
    CLI::App* cmd_spectrum =
        app.add_subcommand("spectrum", "analytic dressed spectrum of the coupled system");
    add_family_options(cmd_spectrum, sp_fa);
    cmd_spectrum->add_option("--omega-drive", sp_omega, "drive strength Omega");
    cmd_spectrum->add_option("--levels", sp_levels, "number of dressed pairs to list");
    add_output_options(cmd_spectrum, sp_out);

    FamilyArgs dr_fa;
    OutputArgs dr_out;
    double dr_omega = 0.0;
    int dr_n_max = 3;
    CLI::App* cmd_dressed =
        app.add_subcommand("dressed", "truncated dressed-basis matrix and its spectrum");
    add_family_options(cmd_dressed, dr_fa);
    cmd_dressed->add_option("--omega-drive", dr_omega, "drive strength Omega");
    cmd_dressed->add_option("--n-max", dr_n_max, "highest retained pair index");
    add_output_options(cmd_dressed, dr_out);

    FamilyArgs ve_fa;
    OutputArgs ve_out;
    GridArgs ve_grid;
    double ve_omega = 0.0;
    double ve_tol = 1e-3;
    int ve_levels = 5;
    int ve_dump = 0;
    std::string ve_dump_path = "states.csv";
    bool ve_converge = false;
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "check the analytic spectrum against a grid solve");
    add_family_options(cmd_verify, ve_fa);
    cmd_verify->add_option("--omega-drive", ve_omega, "drive strength Omega");
    cmd_verify->add_option("--levels", ve_levels, "number of spectrum entries to compare");
    add_grid_options(cmd_verify, ve_grid);
    cmd_verify->add_option("--tolerance", ve_tol, "relative error gate")->check(CLI::PositiveNumber);
    cmd_verify->add_flag("--converge", ve_converge, "append a three-step refinement study");
    cmd_verify->add_option("--dump-states", ve_dump, "write the lowest K eigenvectors to csv");
    cmd_verify->add_option("--dump-path", ve_dump_path, "eigenvector csv path");
    add_output_options(cmd_verify, ve_out);

    FamilyArgs re_fa;
    OutputArgs re_out;
    GridArgs re_grid;
    bool re_break = false;
    CLI::App* cmd_residual =
        app.add_subcommand("residual", "discrete partner-ladder identity check at two resolutions");
    add_family_options(cmd_residual, re_fa);
    add_grid_options(cmd_residual, re_grid);
    cmd_residual->add_flag("--break-remainder", re_break,
                           "offset the remainder term to demonstrate sensitivity");
    add_output_options(cmd_residual, re_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_families->parsed()) return run_families(fam_out);
        if (cmd_spectrum->parsed()) return run_spectrum(sp_fa, sp_omega, sp_levels, sp_out);
        if (cmd_dressed->parsed()) return run_dressed(dr_fa, dr_omega, dr_n_max, dr_out);
        if (cmd_verify->parsed())
            return run_verify(ve_fa, ve_omega, ve_levels, ve_grid, ve_tol, ve_converge, ve_dump,
                              ve_dump_path, ve_out);
        if (cmd_residual->parsed()) return run_residual(re_fa, re_grid, re_break, re_out);
        std::fprintf(stderr, "error: no subcommand selected\n");
        return 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const sijc::ConvergenceFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
