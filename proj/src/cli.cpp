// SPDX-License-Identifier: Apache-2.0
//
// latred - lattice-reduction-aided MIMO detection toolkit
// Copyright (C) 2026 The latred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "latred/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string_view>

#include "latred/fxp.hpp"
#include "latred/reduction.hpp"

namespace latred::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view tok, std::size_t line_no) {
    double v = 0.0;
    const auto* first = tok.data();
    if (!tok.empty() && tok.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw MatrixFormatError("line " + std::to_string(line_no) + ": bad number '" +
                                std::string(tok) + "'");
    }
    return v;
}

std::string fmt_double(double v, int precision) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, precision);
    return {buf.data(), res.ptr};
}

std::string fmt_shortest(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

std::string fmt_gauss(Complex c) {
    const auto re = static_cast<long long>(c.real());
    const auto im = static_cast<long long>(c.imag());
    if (im == 0) {
        return std::to_string(re);
    }
    std::string imag = (im == 1 ? "" : im == -1 ? "-" : std::to_string(im)) + "j";
    if (re == 0) {
        return imag;
    }
    return std::to_string(re) + (im > 0 ? "+" : "") + imag;
}

std::string fmt_gauss_matrix(const ComplexMatrix& t) {
    std::string s = "[";
    for (std::size_t i = 0; i < t.rows(); ++i) {
        s += i ? ",[" : "[";
        for (std::size_t j = 0; j < t.cols(); ++j) {
            s += (j ? "," : "") + fmt_gauss(t(i, j));
        }
        s += "]";
    }
    return s + "]";
}

} // namespace

ComplexMatrix read_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool have_header = false;
    ComplexMatrix m;
    std::size_t row = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        std::istringstream ls{std::string(body)};
        if (!have_header) {
            long long r = 0;
            long long c = 0;
            std::string extra;
            if (!(ls >> r >> c) || (ls >> extra) || r < 1 || c < 1 || r > 4096 || c > 4096) {
                throw MatrixFormatError("line " + std::to_string(line_no) +
                                        ": expected header 'rows cols'");
            }
            rows = static_cast<std::size_t>(r);
            cols = static_cast<std::size_t>(c);
            m = ComplexMatrix(rows, cols);
            have_header = true;
            continue;
        }
        if (row >= rows) {
            throw MatrixFormatError("line " + std::to_string(line_no) + ": too many rows");
        }
        std::string tok;
        std::size_t col = 0;
        while (ls >> tok) {
            const auto comma = tok.find(',');
            if (comma == std::string::npos || col >= cols) {
                throw MatrixFormatError("line " + std::to_string(line_no) +
                                        ": expected " + std::to_string(cols) + " 're,im' pairs");
            }
            const std::string_view sv(tok);
            m(row, col++) = {parse_double(sv.substr(0, comma), line_no),
                             parse_double(sv.substr(comma + 1), line_no)};
        }
        if (col != cols) {
            throw MatrixFormatError("line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(cols) + " 're,im' pairs");
        }
        ++row;
    }
    if (!have_header) {
        throw MatrixFormatError("missing 'rows cols' header");
    }
    if (row != rows) {
        throw MatrixFormatError("expected " + std::to_string(rows) + " rows, got " +
                                std::to_string(row));
    }
    return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw MatrixFormatError("cannot open " + path);
    }
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out << (j ? " " : "") << fmt_shortest(m(i, j).real()) << ','
                << fmt_shortest(m(i, j).imag());
        }
        out << '\n';
    }
}

std::string ber_csv(const SweepResult& result) {
    std::string s = "snr_db,detector,arith,trials,bit_errors,bits_total,ber\n";
    for (const auto& p : result.points) {
        s += fmt_shortest(p.snr_db);
        s += ',';
        s += to_string(p.detector);
        s += ',';
        s += to_string(p.arithmetic);
        s += ',' + std::to_string(p.trials) + ',' + std::to_string(p.bit_errors) + ',' +
             std::to_string(p.bits_total) + ',' + fmt_double(p.ber, 12) + '\n';
    }
    return s;
}

std::string fxp_golden_vectors(std::uint64_t seed, std::size_t count) {
    using namespace latred::fxp;
    std::ostringstream os;
    os << "# cmul  <a> <b> -> <a*b>            (packed re:hi im:lo, Q3.12)\n";
    os << "# cordic <x:y> -> <cos:sin> <magnitude>\n";
    os << std::hex << std::setfill('0');
    Rng rng(seed);
    auto word = [&] { return static_cast<std::uint32_t>(rng.next_u64() >> 32); };
    // Fixed corner cases first, then random words.
    const std::array<std::uint32_t, 6> corners = {0x10000000u, 0x00001000u, 0x7FFF7FFFu,
                                                  0x80008000u, 0x00000000u, 0xF000F000u};
    for (auto a : corners) {
        for (auto b : corners) {
            os << "cmul " << std::setw(8) << a << ' ' << std::setw(8) << b << ' ' << std::setw(8)
               << cmul(CFx{a}, CFx{b}).value.packed << '\n';
        }
    }
    for (std::size_t i = 0; i < count; ++i) {
        const CFx a{word()};
        const CFx b{word()};
        os << "cmul " << std::setw(8) << a.packed << ' ' << std::setw(8) << b.packed << ' '
           << std::setw(8) << cmul(a, b).value.packed << '\n';
    }
    for (std::size_t i = 0; i < count; ++i) {
        // Inputs with magnitude inside the accepted range (< 8 / K).
        const double mag = 0.1 + 3.8 * rng.uniform();
        const double ang = 2.0 * std::numbers::pi * rng.uniform();
        const Fx x = to_fx(mag * std::cos(ang)).value;
        const Fx y = to_fx(mag * std::sin(ang)).value;
        if (x.raw == 0 && y.raw == 0) {
            continue;
        }
        const CordicResult r = cordic_master_slave(x, y);
        os << "cordic " << std::setw(8) << pack(x, y).packed << ' ' << std::setw(8)
           << pack(r.cos_out, r.sin_out).packed << ' ' << std::setw(4)
           << static_cast<std::uint16_t>(r.magnitude.raw) << '\n';
    }
    return os.str();
}

namespace {

struct UsageError : Error {
    using Error::Error;
};

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("LATRED_SEED"); env && *env) {
        std::uint64_t v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw UsageError("LATRED_SEED is not an unsigned integer");
        }
        return v;
    }
    return flag_seed;
}

Arithmetic parse_arith(const std::string& s) {
    return s == "fixed" ? Arithmetic::fixed : Arithmetic::floating;
}

struct MatrixSource {
    std::string in_path;
    bool random = false;
    std::uint64_t seed = 1;
    std::size_t n_r = 4;
    std::size_t m_t = 4;

    void add_options(CLI::App& cmd) {
        auto* in = cmd.add_option("--in", in_path, "matrix file ('rows cols' header, then re,im pairs)");
        auto* rnd = cmd.add_flag("--random", random, "draw an i.i.d. CN(0,1) channel");
        in->excludes(rnd);
        cmd.add_option("--seed", seed, "seed for --random");
        cmd.add_option("--nr", n_r, "rows of the random channel")->check(CLI::Range(1, 64));
        cmd.add_option("--mt", m_t, "columns of the random channel")->check(CLI::Range(1, 64));
    }

    ComplexMatrix load() const {
        if (!random && in_path.empty()) {
            throw UsageError("need --in FILE or --random");
        }
        if (random) {
            if (n_r < m_t) {
                throw UsageError("--nr must be >= --mt");
            }
            Rng rng(effective_seed(seed));
            return gen_channel(rng, n_r, m_t);
        }
        ComplexMatrix h = read_matrix_file(in_path);
        if (h.rows() < h.cols()) {
            throw MatrixFormatError("matrix needs rows >= cols");
        }
        return h;
    }
};

struct ReduceOptions {
    std::size_t iterations = 5;
    bool unlimited = false;
    double delta = 0.75;
    std::string arith = "float";
    std::string algorithm = "mlll";
    bool no_early_termination = false;

    void add_options(CLI::App& cmd, bool with_algorithm, bool with_arith) {
        cmd.add_option("--iterations", iterations, "MLLL body-iteration budget");
        cmd.add_flag("--unlimited", unlimited, "run MLLL until the basis is reduced");
        cmd.add_option("--delta", delta, "swap-test delta in (0.5, 1]");
        if (with_arith) {
            cmd.add_option("--arith", arith, "float or fixed")->check(CLI::IsMember({"float", "fixed"}));
        }
        if (with_algorithm) {
            cmd.add_option("--algorithm", algorithm, "mlll or clll")
                ->check(CLI::IsMember({"mlll", "clll"}));
        }
        cmd.add_flag("--no-early-termination", no_early_termination,
                     "disable the clean-sweep stop");
    }

    MlllConfig config() const {
        MlllConfig c;
        c.delta = delta;
        c.max_body_iterations = unlimited ? kUnlimitedIterations : iterations;
        c.early_termination = !no_early_termination;
        c.arithmetic = parse_arith(arith);
        try {
            c.validate();
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

int cmd_sweep(const SimConfig& cfg, unsigned workers, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
    const SweepResult res = run_sweep(cfg, workers);
    const std::string csv = ber_csv(res);
    if (out_path.empty() || out_path == "-") {
        out << csv;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        f << csv;
        if (!f) {
            err << "error: cannot write " << out_path << '\n';
            return kExitRuntime;
        }
    }
    return kExitOk;
}

void print_reduction(std::ostream& out, const ComplexMatrix& h, const ReducedBasis& rb,
                     const std::string& algorithm, Arithmetic arith, bool& self_check_ok) {
    const QrFactors f = qr_decompose(h).thin();
    out << "algorithm: " << algorithm << '\n';
    out << "arith: " << to_string(arith) << '\n';
    out << "dimension: " << h.rows() << 'x' << h.cols() << '\n';
    out << "iterations_used: " << rb.body_iterations_used << '\n';
    out << "swaps: " << rb.swap_count << '\n';
    out << "converged: " << (rb.converged ? "true" : "false") << '\n';
    out << "T = " << fmt_gauss_matrix(rb.t) << '\n';
    out << "r_diag =";
    for (std::size_t i = 0; i < rb.r_tilde.rows(); ++i) {
        out << ' ' << fmt_double(std::abs(rb.r_tilde(i, i)), 10);
    }
    out << '\n';
    out << "defect_before: " << fmt_double(orthogonality_defect(h), 10) << '\n';
    out << "defect_after: " << fmt_double(orthogonality_defect(h * rb.t), 10) << '\n';
    if (arith == Arithmetic::fixed) {
        out << "mu_clamps: " << rb.mu_clamps << '\n';
        out << "saturations: " << rb.saturations << '\n';
    }

    const InvariantReport rep = check_invariants(f.q, f.r, rb);
    // Q3.12 factors carry quantization error of a few LSB per entry.
    const bool fixed = arith == Arithmetic::fixed;
    self_check_ok = fixed ? rep.ok(2e-2, 2e-2, 2e-2) : rep.ok();
    out << "invariants: " << (self_check_ok ? "OK" : "FAILED") << " (factor_residual "
        << fmt_double(rep.factor_residual, 3) << ", |det T| error " << fmt_double(rep.det_t_error, 3)
        << ", unitarity " << fmt_double(rep.unitarity_error, 3) << ")\n";
}

int cmd_reduce(const MatrixSource& src, const ReduceOptions& opt, std::ostream& out) {
    const MlllConfig cfg = opt.config();
    const ComplexMatrix h = src.load();
    const QrFactors f = qr_decompose(h).thin();
    const bool clll = opt.algorithm == "clll";
    const ReducedBasis rb = clll ? clll_reduce(f.q, f.r, cfg.delta) : mlll_reduce(f.q, f.r, cfg);
    bool ok = false;
    print_reduction(out, h, rb, opt.algorithm, clll ? Arithmetic::floating : cfg.arithmetic, ok);
    return ok ? kExitOk : kExitRuntime;
}

struct TableRow {
    const char* name;
    std::uint64_t measured;
    int reference;
};

int cmd_opcount(const MatrixSource& src, const ReduceOptions& opt, std::ostream& out) {
    MlllConfig cfg = opt.config();
    cfg.arithmetic = Arithmetic::fixed;
    const ComplexMatrix h = src.load();
    const ReducedBasis rb = reduce_channel(h, cfg);
    const OpCounters c = snapshot_counters(rb);

    out << "matrix: " << h.rows() << 'x' << h.cols() << ", budget "
        << (cfg.max_body_iterations == kUnlimitedIterations ? std::string("unlimited")
                                                             : std::to_string(cfg.max_body_iterations))
        << ", arith fixed\n";
    out << "iterations_used: " << rb.body_iterations_used << ", swaps: " << rb.swap_count
        << ", converged: " << (rb.converged ? "true" : "false") << '\n';
    const std::array<TableRow, 6> rows = {{{"ARRANGE", c.arrange, 18},
                                           {"CORDIC", c.cordic, 9},
                                           {"CMUL", c.cmul, 72},
                                           {"STREAM", c.stream, 84},
                                           {"SIEGEL", c.siegel, 3},
                                           {"SIZE REDUCTION", c.size_reduction, 34}}};
    out << std::left << std::setw(16) << "operation" << std::right << std::setw(10) << "measured"
        << "  published reference (compiler-scheduled, informational)\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(16) << r.name << std::right << std::setw(10) << r.measured
            << "  " << r.reference << '\n';
    }
    out << std::left << std::setw(16) << "cordic passes" << std::right << std::setw(10)
        << c.cordic_calls << '\n';
    out << std::left << std::setw(16) << "mu clamps" << std::right << std::setw(10) << rb.mu_clamps
        << '\n';
    out << std::left << std::setw(16) << "saturations" << std::right << std::setw(10)
        << rb.saturations << '\n';
    return kExitOk;
}

int cmd_cordic_check(std::size_t samples, std::uint64_t seed, const std::string& golden_out,
                     std::size_t golden_count, std::ostream& out, std::ostream& err) {
    using namespace latred::fxp;
    Rng rng(seed);
    double max_cos = 0.0;
    double max_sin = 0.0;
    double max_mag = 0.0;
    double max_norm = 0.0;
    std::size_t mismatches = 0;
    std::size_t used = 0;
    while (used < samples) {
        const double mag = 0.1 + 3.8 * rng.uniform();
        const double ang = 2.0 * std::numbers::pi * rng.uniform();
        const Fx x = to_fx(mag * std::cos(ang)).value;
        const Fx y = to_fx(mag * std::sin(ang)).value;
        const double xd = x.to_double();
        const double yd = y.to_double();
        const double m = std::hypot(xd, yd);
        if (m < 0.1 || m > 3.9) {
            continue;
        }
        ++used;
        const CordicResult r = cordic_master_slave(x, y);
        const CordicResult s = cordic_master_slave_sequential(x, y);
        if (r.cos_out != s.cos_out || r.sin_out != s.sin_out || r.magnitude != s.magnitude) {
            ++mismatches;
        }
        const double c = r.cos_out.to_double();
        const double sn = r.sin_out.to_double();
        max_cos = std::max(max_cos, std::abs(c - xd / m));
        max_sin = std::max(max_sin, std::abs(sn - yd / m));
        max_mag = std::max(max_mag, std::abs(r.magnitude.to_double() - m) / m);
        max_norm = std::max(max_norm, std::abs(c * c + sn * sn - 1.0));
    }
    const double tol_trig = std::ldexp(1.0, -10);
    const double tol_mag = std::ldexp(1.0, -9);
    const bool pass = max_cos <= tol_trig && max_sin <= tol_trig && max_mag <= tol_mag &&
                      max_norm <= tol_mag && mismatches == 0;
    out << "samples: " << used << '\n';
    out << "max_cos_error: " << fmt_double(max_cos, 6) << " (limit 2^-10)\n";
    out << "max_sin_error: " << fmt_double(max_sin, 6) << " (limit 2^-10)\n";
    out << "max_magnitude_rel_error: " << fmt_double(max_mag, 6) << " (limit 2^-9)\n";
    out << "max_norm_error: " << fmt_double(max_norm, 6) << " (limit 2^-9)\n";
    out << "stage_grouping_mismatches: " << mismatches << '\n';
    out << "result: " << (pass ? "PASS" : "FAIL") << '\n';

    if (!golden_out.empty()) {
        std::ofstream f(golden_out, std::ios::binary);
        f << fxp_golden_vectors(seed, golden_count);
        if (!f) {
            err << "error: cannot write " << golden_out << '\n';
            return kExitRuntime;
        }
    }
    return pass ? kExitOk : kExitRuntime;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"latred: lattice-reduction-aided MIMO detection toolkit", "latred"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo BER sweep, CSV output");
    SimConfig sim;
    std::vector<double> snr = sim.snr_db_grid;
    std::vector<std::string> detectors = {"zf", "lr_zf_mlll", "lr_zf_clll", "ml"};
    std::size_t ml_trials = 0;
    std::string sweep_out;
    unsigned workers = 1;
    ReduceOptions sweep_red;
    sweep->add_option("--snr", snr, "SNR grid in dB, comma separated")->delimiter(',');
    sweep->add_option("--trials", sim.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    sweep->add_option("--ml-trials", ml_trials, "trials evaluated by the ML detector (default: all)");
    sweep->add_option("--seed", sim.seed, "master seed");
    sweep->add_option("--detectors", detectors, "zf,lr_zf_mlll,lr_zf_clll,ml")
        ->delimiter(',')
        ->check(CLI::IsMember({"zf", "lr_zf_mlll", "lr_zf_clll", "ml"}));
    sweep->add_option("--nr", sim.n_r, "receive antennas")->check(CLI::Range(1, 64));
    sweep->add_option("--mt", sim.m_t, "transmit antennas")->check(CLI::Range(1, 64));
    sweep->add_option("--workers", workers, "worker threads")->check(CLI::Range(1, 256));
    sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");
    sweep_red.add_options(*sweep, false, true);

    // reduce
    auto* reduce = app.add_subcommand("reduce", "reduce one channel matrix and report");
    MatrixSource reduce_src;
    ReduceOptions reduce_opt;
    reduce_src.add_options(*reduce);
    reduce_opt.add_options(*reduce, true, true);

    // opcount
    auto* opcount = app.add_subcommand("opcount", "fixed-point kernel counts of one reduction");
    MatrixSource op_src;
    ReduceOptions op_opt;
    op_src.add_options(*opcount);
    op_opt.add_options(*opcount, false, false);

    // cordic-check
    auto* cordic = app.add_subcommand("cordic-check", "CORDIC accuracy sweep and golden vectors");
    std::size_t samples = 100000;
    std::uint64_t cordic_seed = 1;
    std::string golden_out;
    std::size_t golden_count = 256;
    cordic->add_option("--samples", samples, "random inputs")->check(CLI::PositiveNumber);
    cordic->add_option("--seed", cordic_seed, "seed");
    cordic->add_option("--golden-out", golden_out, "write CMUL/CORDIC golden vectors here");
    cordic->add_option("--golden-count", golden_count, "random vectors per kernel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*sweep) {
            sim.snr_db_grid = snr;
            sim.detectors.clear();
            for (const auto& d : detectors) {
                sim.detectors.push_back(*parse_detector(d));
            }
            if (ml_trials > 0) {
                sim.ml_trials = ml_trials;
            }
            sim.mlll = sweep_red.config();
            sim.seed = effective_seed(sim.seed);
            try {
                sim.validate();
            } catch (const ConfigError& e) {
                throw UsageError(e.what());
            }
            return cmd_sweep(sim, workers, sweep_out, out, err);
        }
        if (*reduce) {
            return cmd_reduce(reduce_src, reduce_opt, out);
        }
        if (*opcount) {
            return cmd_opcount(op_src, op_opt, out);
        }
        if (*cordic) {
            return cmd_cordic_check(samples, effective_seed(cordic_seed), golden_out, golden_count,
                                    out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MatrixFormatError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace latred::cli
