// Acceptance gate: one line per criterion, stated tolerances, nonzero exit on
// any failure. Run from ctest or directly; no arguments.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sijc/algebra.hpp"
#include "sijc/dressed.hpp"
#include "sijc/grid.hpp"
#include "sijc/linalg.hpp"
#include "test_paths.hpp"

using sijc::Branch;
using sijc::PotentialFamily;

namespace {

int g_failures = 0;
std::string g_detail;

void note(const std::string& msg) {
    if (!g_detail.empty()) g_detail += "; ";
    g_detail += msg;
}

bool expect(bool ok, const std::string& what) {
    if (!ok) note(what);
    return ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int index, const char* name, bool ok, double secs) {
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", index, name, secs,
                g_detail.empty() ? "" : " -- ", g_detail.c_str());
    g_detail.clear();
}

struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}
    double next() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) * (1.0 / 4503599627370496.0) - 1.0;
    }
    double in(double lo, double hi) { return lo + (next() + 1.0) * 0.5 * (hi - lo); }
};

PotentialFamily random_morse(Lcg& gen) {
    for (;;) {
        const double v0 = gen.in(4.0, 80.0);
        const double lambda = gen.in(0.3, 2.0);
        const double mass = gen.in(0.2, 3.0);
        const double hbar = gen.in(0.5, 2.0);
        const double step = hbar * lambda / std::sqrt(2.0 * mass);
        if (std::sqrt(v0) - 0.5 * step > 2.0 * step)
            return PotentialFamily::morse(v0, lambda, mass, hbar);
    }
}

const PotentialFamily kWell = PotentialFamily::morse(25.0, 1.0, 0.5);

// ---- criterion bodies ----

bool closed_form_self_consistency() {
    Lcg gen(101);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const PotentialFamily mo = random_morse(gen);
        const double omega = gen.in(0.0, 5.0);
        const int cap = *level_count(mo);
        const int m = trial % cap;
        for (const Branch b : {Branch::Minus, Branch::Plus}) {
            const double a = jc_eigenvalue(mo, omega, m, b);
            const double c = morse_closed_form(mo, omega, m, b);
            const double scale = std::max({1.0, std::abs(a), std::abs(c)});
            if (!(std::abs(a - c) <= 1e-12 * scale)) {
                ok = expect(false, "trial " + std::to_string(trial) + " deviates");
            }
        }
    }
    return ok;
}

bool dressed_matrix_oracle() {
    const sijc::dressed::DressedSpectrum spec = sijc::dressed::diagonalize_dressed(kWell, 2.0, 3);
    const double targets[4][2] = {{4.0, 12.0},
                                  {14.0 - std::sqrt(28.0), 14.0 + std::sqrt(28.0)},
                                  {12.0, 24.0},
                                  {20.0 - std::sqrt(40.0), 20.0 + std::sqrt(40.0)}};
    bool ok = expect(std::abs(spec.ground) <= 1e-10, "ground deviates");
    ok = expect(spec.levels.size() == 4, "wrong level count") && ok;
    for (std::size_t m = 0; m < spec.levels.size(); ++m) {
        ok = expect(std::abs(spec.levels[m].e_minus - targets[m][0]) <= 1e-10,
                    "minus branch m=" + std::to_string(m)) &&
             ok;
        ok = expect(std::abs(spec.levels[m].e_plus - targets[m][1]) <= 1e-10,
                    "plus branch m=" + std::to_string(m)) &&
             ok;
    }
    ok = expect(spec.max_abs_deviation <= 1e-10, "max deviation breaches 1e-10") && ok;
    return ok;
}

bool grid_oracle_morse() {
    const sijc::grid::VerificationReport rep =
        sijc::grid::verify_spectrum(kWell, 2.0, {-2.5, 14.0, 1000}, 5);
    bool ok = true;
    for (const sijc::grid::LevelComparison& lc : rep.levels) {
        if (lc.analytic == 0.0)
            ok = expect(lc.abs_error <= 1e-2, lc.label + " absolute error") && ok;
        else
            ok = expect(lc.rel_error <= 1e-3, lc.label + " relative error") && ok;
    }
    ok = expect(rep.ground_leakage <= 1e-6, "ground leakage") && ok;
    return ok;
}

bool grid_oracle_ho_reduction() {
    const sijc::grid::GridHamiltonian ham =
        sijc::grid::build_two_channel(PotentialFamily::harmonic(1.0, 1.0), 4.0,
                                      {-6.0, 6.0, 1200});
    const std::vector<double> values = sijc::linalg::eig_symmetric(ham.matrix, false).values;
    bool ok = true;
    for (const double target : {-1.0, 0.0, 3.0}) {
        double best = 1e300;
        for (const double v : values) best = std::min(best, std::abs(v - target));
        ok = expect(best <= 1e-4,
                    "level " + std::to_string(target) + " missed by " + std::to_string(best)) &&
             ok;
    }
    return ok;
}

bool convergence_order() {
    const std::vector<sijc::grid::ConvergenceRow> rows =
        sijc::grid::convergence_study(kWell, 2.0, {-2.5, 14.0, 1000}, 5);
    bool ok = expect(rows.size() == 3, "study must have three rows");
    for (std::size_t step = 1; step < rows.size(); ++step) {
        for (const sijc::grid::ConvergenceLevel& lvl : rows[step].levels) {
            if (!lvl.order) continue;  // below the precision floor
            ok = expect(*lvl.order >= 1.6 && *lvl.order <= 2.4,
                        lvl.label + " order " + std::to_string(*lvl.order)) &&
                 ok;
        }
    }
    return ok;
}

bool shape_invariance_identity() {
    const PotentialFamily osc = PotentialFamily::harmonic(1.0, 1.0);
    const double ho_coarse = sijc::grid::shape_invariance_residual(osc, {-8.0, 8.0, 400});
    const double ho_fine = sijc::grid::shape_invariance_residual(osc, {-8.0, 8.0, 801});
    const double ho_ratio = ho_coarse / ho_fine;
    bool ok = expect(ho_ratio >= 3.0 && ho_ratio <= 5.0,
                     "oscillator ratio " + std::to_string(ho_ratio));

    const double mo_coarse = sijc::grid::shape_invariance_residual(kWell, {-2.5, 14.0, 1000});
    const double mo_fine = sijc::grid::shape_invariance_residual(kWell, {-2.5, 14.0, 2001});
    const double mo_ratio = mo_coarse / mo_fine;
    ok = expect(mo_coarse <= 1e-3, "morse residual " + std::to_string(mo_coarse)) && ok;
    ok = expect(mo_ratio >= 3.0 && mo_ratio <= 5.0, "morse ratio " + std::to_string(mo_ratio)) &&
         ok;

    for (const PotentialFamily& fam : {osc, kWell}) {
        const sijc::grid::GridSpec g =
            fam.is_morse() ? sijc::grid::GridSpec{-2.5, 14.0, 1000}
                           : sijc::grid::GridSpec{-8.0, 8.0, 400};
        const double broken = sijc::grid::shape_invariance_residual(fam, g, 1.0);
        ok = expect(broken >= 0.5, fam.name() + std::string(" broken residual not detected")) &&
             ok;
    }
    return ok;
}

bool spectral_algebra_properties() {
    Lcg gen(107);
    bool ok = true;
    for (int trial = 0; trial < 30; ++trial) {
        PotentialFamily fam = [&]() -> PotentialFamily {
            const int which = trial % 3;
            if (which == 0)
                return PotentialFamily::harmonic(gen.in(0.3, 3.0), gen.in(0.3, 3.0),
                                                 gen.in(0.5, 2.0));
            if (which == 1) return random_morse(gen);
            return PotentialFamily::scaling(gen.in(0.2, 4.0), gen.in(0.05, 0.95));
        }();
        const double omega = gen.in(0.0, 5.0);
        const auto cap = level_count(fam);
        const int top = cap ? std::min(*cap - 1, 5) : 5;
        double telescoped = 0.0;
        for (int m = 0; m <= top; ++m) {
            const double eps = energy_level(fam, m + 1).epsilon;
            const double minus = jc_eigenvalue(fam, omega, m, Branch::Minus);
            const double plus = jc_eigenvalue(fam, omega, m, Branch::Plus);
            ok = expect(std::abs(minus + plus - 2.0 * eps) <= 1e-13 * std::max(1.0, 2.0 * eps),
                        "pair sum") &&
                 ok;
            const double prod = eps * eps - fam.hbar() * omega * eps;
            ok = expect(std::abs(minus * plus - prod) <= 1e-12 * std::max(1.0, std::abs(prod)),
                        "pair product") &&
                 ok;
            telescoped += remainder(fam, m + 1);
            ok = expect(std::abs(telescoped - eps) <= 1e-13 * std::max(1.0, eps),
                        "telescoping") &&
                 ok;
            const double m0 = jc_eigenvalue(fam, 0.0, m, Branch::Minus);
            const double p0 = jc_eigenvalue(fam, 0.0, m, Branch::Plus);
            ok = expect(m0 == p0, "zero-drive degeneracy") && ok;
        }

        // coupling-matrix spectrum: 0 plus the signed square roots
        const int n_max = cap ? std::min(*cap - 1, 3) : 3;
        const sijc::linalg::EigenDecomposition eig =
            sijc::linalg::eig_symmetric(sijc::dressed::s_matrix(fam, n_max).symmetric(), false);
        std::vector<double> want = {0.0};
        for (int m = 0; m <= n_max; ++m) {
            const double root = std::sqrt(energy_level(fam, m + 1).epsilon);
            want.push_back(root);
            want.push_back(-root);
        }
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < want.size(); ++i)
            ok = expect(std::abs(eig.values[i] - want[i]) <= 1e-10, "coupling spectrum") && ok;
    }
    return ok;
}

// ---- cli helpers for criterion 8 ----

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(kCliPath) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return {};
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool cli_determinism() {
    bool ok = true;
    const struct {
        const char* args;
        const char* golden;
    } cases[] = {
        {"families", "families.txt"},
        {"families --format json", "families.json"},
        {"spectrum --family morse --v0 25 --lambda 1 --mass 0.5 --omega-drive 2 --levels 4",
         "spectrum_morse.txt"},
        {"spectrum --family morse --v0 25 --lambda 1 --mass 0.5 --omega-drive 2 --levels 4 "
         "--format json",
         "spectrum_morse.json"},
        {"spectrum --family morse --v0 25 --lambda 1 --mass 0.5 --omega-drive 2 --levels 4 "
         "--format csv",
         "spectrum_morse.csv"},
        {"dressed --family morse --v0 25 --lambda 1 --mass 0.5 --omega-drive 2 --n-max 3",
         "dressed_morse.txt"},
    };
    for (const auto& c : cases) {
        const RunResult run = run_cli(c.args);
        ok = expect(run.exit_code == 0, std::string(c.golden) + " exit code") && ok;
        std::ifstream f(std::string(kGoldenDir) + "/" + c.golden, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        ok = expect(f.good() && run.out == ss.str(),
                    std::string(c.golden) + " bytes differ") &&
             ok;
    }

    const RunResult over = run_cli(
        "spectrum --family morse --v0 25 --lambda 1 --mass 0.5 --omega-drive 2 --levels 9");
    ok = expect(over.exit_code == 3, "over-request should exit 3") && ok;
    const RunResult breach = run_cli(
        "verify --family morse --v0 25 --lambda 1 --mass 0.5 --omega-drive 2 --n-points 300 "
        "--tolerance 1e-9");
    ok = expect(breach.exit_code == 4, "tolerance breach should exit 4") && ok;
    return ok;
}

using Criterion = bool (*)();

struct Entry {
    const char* name;
    Criterion body;
    double budget_seconds;  // 0 means no stated budget
};

}  // namespace

int main() {
    const Entry entries[] = {
        {"closed-form self-consistency (1e-12)", closed_form_self_consistency, 1.0},
        {"dressed-matrix oracle (1e-10)", dressed_matrix_oracle, 1.0},
        {"grid oracle, morse reference (1e-3 rel, leakage 1e-6)", grid_oracle_morse, 150.0},
        {"grid oracle, oscillator reduction (1e-4)", grid_oracle_ho_reduction, 60.0},
        {"convergence order (p in [1.6, 2.4])", convergence_order, 0.0},
        {"shape-invariance identity (ratio in [3, 5])", shape_invariance_identity, 0.0},
        {"spectral algebra properties", spectral_algebra_properties, 0.0},
        {"cli determinism and exit codes", cli_determinism, 0.0},
    };
    int index = 0;
    for (const Entry& entry : entries) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = entry.body();
        } catch (const std::exception& e) {
            note(std::string("exception: ") + e.what());
        }
        const double secs = seconds_since(t0);
        if (entry.budget_seconds > 0.0 && secs > entry.budget_seconds) {
            note("runtime " + std::to_string(secs) + " s over budget");
            ok = false;
        }
        report(index, entry.name, ok, secs);
    }
    if (g_failures == 0) {
        std::printf("all 8 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
