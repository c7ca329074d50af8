#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfkit/io.hpp"
#include "dfkit/oracle.hpp"
#include "dfkit/portfolio.hpp"
#include "dfkit/reconstruct.hpp"
#include "dfkit/return_space.hpp"
#include "dfkit/static_replication.hpp"

namespace {

using namespace dfkit;

std::vector<double> parse_number_list(const std::string& spec, const char* ctx) {
    std::vector<double> out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw validation_error(std::string(ctx) + ": bad number \"" + item + "\"");
        }
    }
    if (out.empty()) throw validation_error(std::string(ctx) + ": empty list");
    return out;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw io_error("cannot write " + path);
    return file;
}

/// Invariant suite shared by `verify` and the round-trip checks; throws a
/// validation_error naming the first violated invariant.
void check_curve_invariants(const PriceCurve& curve) {
    curve.validate_grid();
    const auto& k = curve.strikes;
    const auto& v = curve.values;
    const bool put = curve.role == OptionRole::Put;
    const double tol = 1e-9;

    auto at = [&](size_t i) { return std::to_string(k[i]); };
    for (size_t i = 0; i + 1 < k.size(); ++i) {
        if (put && v[i + 1] < v[i] - tol)
            throw validation_error("put curve not nondecreasing at k=" + at(i + 1));
        if (!put && v[i + 1] > v[i] + tol)
            throw validation_error("call curve not nonincreasing at k=" + at(i + 1));
    }
    for (size_t i = 1; i + 1 < k.size(); ++i) {
        const double left = (v[i] - v[i - 1]) / (k[i] - k[i - 1]);
        const double right = (v[i + 1] - v[i]) / (k[i + 1] - k[i]);
        if (left > right + tol) {
            throw validation_error(std::string(put ? "put" : "call") +
                                   " curve not convex at k=" + at(i));
        }
    }
    if (put && !k.empty() && k.front() == 0.0 && std::abs(v.front()) > tol)
        throw validation_error("put curve value at k=0 is not 0");
    if (curve.f_infinity) {
        for (size_t i = 0; i < k.size(); ++i) {
            if (put && v[i] > k[i] * *curve.f_infinity + tol)
                throw validation_error("put curve violates P(k) <= k F(inf) at k=" + at(i));
            if (!put && curve.mean && v[i] > *curve.mean + tol)
                throw validation_error("call curve exceeds C(0) = mean at k=" + at(i));
        }
    }
    if (!put && curve.mean && !k.empty() && k.front() == 0.0 &&
        std::abs(v.front() - *curve.mean) > tol)
        throw validation_error("call curve value at k=0 does not equal the mean");
}

int run(int argc, char** argv) {
    CLI::App app{"Stieltjes pricing toolkit: curves, inversion, replication"};
    app.require_subcommand(1);

    // curve
    auto* curve_cmd = app.add_subcommand("curve", "price a put/call curve from a measure");
    std::string measure_path, strikes_spec, role_name = "put", out_path;
    curve_cmd->add_option("--measure", measure_path, "measure JSON")->required();
    curve_cmd->add_option("--strikes", strikes_spec, "grid start:stop:step")->required();
    curve_cmd->add_option("--role", role_name, "put | call")->check(CLI::IsMember({"put", "call"}));
    curve_cmd->add_option("--out", out_path, "output CSV path (sidecar written alongside)")
        ->required();

    // reconstruct
    auto* rec_cmd = app.add_subcommand("reconstruct", "estimate the CDF from a put curve");
    std::string puts_path, rec_out;
    rec_cmd->add_option("--puts", puts_path, "put curve CSV")->required();
    rec_cmd->add_option("--out", rec_out, "output CSV (default stdout)");

    // price
    auto* price_cmd = app.add_subcommand("price", "price a piecewise-DC payoff from a call curve");
    std::string calls_path, payoff_path, verify_measure;
    price_cmd->add_option("--calls", calls_path, "call curve CSV")->required();
    price_cmd->add_option("--payoff", payoff_path, "payoff JSON")->required();
    price_cmd->add_option("--verify", verify_measure, "measure JSON for an oracle cross-check");

    // replicate
    auto* rep_cmd = app.add_subcommand("replicate", "replicate a piecewise-linear payoff");
    std::string nodes_spec, rep_measure, prefer_name = "put";
    double terminal_slope = 0.0;
    rep_cmd->add_option("--nodes", nodes_spec, "x:g pairs, comma separated, first at x=0")
        ->required();
    rep_cmd->add_option("--terminal-slope", terminal_slope, "slope beyond the last node");
    rep_cmd->add_option("--prefer", prefer_name, "put | call legs")
        ->check(CLI::IsMember({"put", "call"}));
    rep_cmd->add_option("--measure", rep_measure, "measure JSON to price the portfolio");

    // converge
    auto* conv_cmd = app.add_subcommand("converge", "log-return put recovery convergence table");
    std::string density_path, orders_spec, k1_spec, conv_out;
    double k2 = 1.0;
    conv_cmd->add_option("--density", density_path, "log-return density JSON")->required();
    conv_cmd->add_option("--orders", orders_spec, "expansion orders, ascending")->required();
    conv_cmd->add_option("--k1", k1_spec, "lower strikes, descending")->required();
    conv_cmd->add_option("--k2", k2, "target strike")->required();
    conv_cmd->add_option("--out", conv_out, "table CSV (default stdout)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check curve invariants");
    std::string vcurve_path, vmeasure_path;
    verify_cmd->add_option("--curve", vcurve_path, "curve CSV")->required();
    verify_cmd->add_option("--measure", vmeasure_path, "measure JSON to reprice against");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    if (curve_cmd->parsed()) {
        const Measure m = load_measure(measure_path);
        const std::vector<double> grid = parse_strike_range(strikes_spec);
        const PriceCurve curve =
            (role_name == "put") ? put_curve(m, grid) : call_curve(m, grid);
        check_curve_invariants(curve);
        save_curve(curve, out_path);
        std::cout << "wrote " << out_path << " (" << grid.size() << " strikes, role "
                  << role_name << ")\n";
        return 0;
    }

    if (rec_cmd->parsed()) {
        const PriceCurve puts = load_curve(puts_path);
        const CdfEstimate est = cdf_from_puts(puts);
        std::ofstream file;
        write_cdf_estimate(est, open_output(file, rec_out));
        return 0;
    }

    if (price_cmd->parsed()) {
        const PriceCurve calls = load_curve(calls_path);
        if (calls.role != OptionRole::Call)
            throw validation_error("price: --calls curve must have role \"call\"");
        check_curve_invariants(calls);
        const PiecewiseDCPayoff payoff = load_payoff(payoff_path);
        const PriceBreakdown result = price_piecewise_dc(calls, payoff);
        std::cout.precision(15);
        std::cout << "price = " << result.value << "\n"
                  << "tail_bound = " << result.tail_bound << " (cut at k = " << result.cut
                  << ")\n";
        if (!verify_measure.empty()) {
            const Measure m = load_measure(verify_measure);
            std::vector<double> bps;
            for (const DCPiece& p : payoff.pieces) {
                bps.push_back(p.lo);
                if (std::isfinite(p.hi)) bps.push_back(p.hi);
                for (const Atom& a : p.curvature.atoms()) bps.push_back(a.x);
            }
            const OracleResult oracle =
                oracle_price(m, [&](double x) { return payoff.value(x); }, {}, bps);
            std::cout << "oracle = " << oracle.price
                      << "  delta = " << std::abs(oracle.price - result.value) << "\n";
        }
        return 0;
    }

    if (rep_cmd->parsed()) {
        std::vector<PayoffNode> nodes;
        std::istringstream in(nodes_spec);
        std::string item;
        while (std::getline(in, item, ',')) {
            const size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw validation_error("replicate: nodes must be x:g pairs");
            try {
                nodes.push_back({std::stod(item.substr(0, colon)),
                                 std::stod(item.substr(colon + 1))});
            } catch (const std::exception&) {
                throw validation_error("replicate: bad number in node \"" + item + "\"");
            }
        }
        const OptionRole prefer = (prefer_name == "put") ? OptionRole::Put : OptionRole::Call;
        const Portfolio p = replicate_piecewise_linear(nodes, terminal_slope, prefer);
        std::cout.precision(15);
        std::cout << "bond = " << p.bond_units << "\nforward = " << p.forward_units << "\n";
        for (const OptionLeg& leg : p.legs)
            std::cout << (leg.role == OptionRole::Put ? "put" : "call") << " k=" << leg.strike
                      << " qty=" << leg.quantity << "\n";
        if (!rep_measure.empty()) {
            const Measure m = load_measure(rep_measure);
            std::cout << "price = " << portfolio_price(p, m) << "\n";
        }
        return 0;
    }

    if (conv_cmd->parsed()) {
        const auto density = load_density(density_path);
        const std::vector<double> orders_d = parse_number_list(orders_spec, "orders");
        std::vector<int> orders;
        for (double o : orders_d) {
            if (o < 0 || o != std::floor(o))
                throw validation_error("orders: must be nonnegative integers");
            orders.push_back(static_cast<int>(o));
        }
        const std::vector<double> k1s = parse_number_list(k1_spec, "k1");
        if (!(k2 > 0.0)) throw validation_error("k2 must be positive");
        const RecoveryResult result = recover_put(density, k2, orders, k1s);

        std::ofstream file;
        std::ostream& out = open_output(file, conv_out);
        out.precision(15);
        out << "order,k1,inner\n";
        for (size_t i = 0; i < result.orders.size(); ++i)
            for (size_t j = 0; j < result.k1s.size(); ++j)
                out << result.orders[i] << ',' << result.k1s[j] << ',' << result.table[i][j]
                    << '\n';
        std::cout.precision(15);
        std::cout << "estimate = " << result.estimate
                  << "  diagonal = " << result.diagonal_estimate
                  << "  correction = " << result.correction << "\n";
        return 0;
    }

    if (verify_cmd->parsed()) {
        const PriceCurve curve = load_curve(vcurve_path);
        check_curve_invariants(curve);
        if (!vmeasure_path.empty()) {
            const Measure m = load_measure(vmeasure_path);
            const bool put = curve.role == OptionRole::Put;
            for (size_t i = 0; i < curve.strikes.size(); ++i) {
                const double k = curve.strikes[i];
                const double ref = put ? m.put_value(k) : m.call_value(k);
                if (std::abs(ref - curve.values[i]) > 1e-8)
                    throw validation_error("curve value at k=" + std::to_string(k) +
                                           " disagrees with the measure");
            }
        }
        std::cout << "ok\n";
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
