#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seccap/commands.hpp"

using namespace seccap;

namespace {

bool parse_pair(const std::string& text, double* a, double* b) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return false;
    try {
        *a = std::stod(text.substr(0, comma));
        *b = std::stod(text.substr(comma + 1));
    } catch (...) {
        return false;
    }
    return true;
}

int write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        std::cerr << "cannot write " << path << "\n";
        return exit_bad_input;
    }
    os << content;
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secret-message capacity regions and packet-level validation for "
                 "erasure relay networks with public feedback"};
    app.require_subcommand(1);

    std::string config_path, topology, mode_str, out_path, svg_path, point_str;
    std::vector<std::string> link_strs;
    std::optional<double> d0;
    std::optional<std::uint64_t> angles, n, seed;
    std::optional<double> margin;
    bool unsafe = false;
    std::uint32_t trials = 1;

    auto add_common = [&](CLI::App* sub, bool sim_opts) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--topology", topology, "y | ry | x");
        sub->add_option("--link", link_strs, "link as delta,delta_e (repeat per link)");
        sub->add_option("--d0", d0, "source randomness rate (ry only)");
        sub->add_option("--angles", angles, "number of swept objective angles");
        sub->add_option("--out", out_path, "write the primary artifact here");
        if (sim_opts) {
            sub->add_option("--n", n, "slot budget per link");
            sub->add_option("--seed", seed, "base RNG seed");
            sub->add_option("--margin", margin, "inward scaling of the operating point, (0,1]");
            sub->add_option("--mode", mode_str, "counting | field");
            sub->add_option("--point", point_str, "operating rate pair r1,r2");
            sub->add_option("--trials", trials, "independent seeds to run and merge");
            sub->add_flag("--unsafe-raw-keys", unsafe,
                          "soundness probe: skip privacy amplification");
        }
    };

    CLI::App* region = app.add_subcommand("region", "trace the capacity region frontier (CSV)");
    add_common(region, false);
    region->add_option("--svg", svg_path, "also write an SVG plot");
    CLI::App* compare =
        app.add_subcommand("compare", "capacity vs link-sharing vs path-sharing (CSV)");
    add_common(compare, false);
    CLI::App* simulate = app.add_subcommand("simulate", "run the packet-level scheme (JSON)");
    add_common(simulate, true);
    std::string transcript_path;
    CLI::App* verify =
        app.add_subcommand("verify", "field-mode run with rank secrecy/decodability checks");
    add_common(verify, true);
    verify->add_option("--transcript", transcript_path, "dump the audit transcript here");

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw std::invalid_argument("cannot read config file " + config_path);
            std::stringstream ss;
            ss << is.rdbuf();
            cfg = parse_config(ss.str());
        }
        // flags override the file
        if (!topology.empty()) {
            auto t = topology_from_name(topology);
            if (!t) throw std::invalid_argument("unknown topology \"" + topology + "\"");
            cfg.net.topology = *t;
        }
        if (!link_strs.empty()) {
            cfg.net.channels.clear();
            for (const auto& s : link_strs) {
                double d = 0, de = 0;
                if (!parse_pair(s, &d, &de))
                    throw std::invalid_argument("--link expects delta,delta_e, got \"" + s + "\"");
                cfg.net.channels.push_back({d, de});
            }
        }
        if (d0) cfg.net.d0 = *d0;
        if (angles) {
            if (*angles < 2) throw std::invalid_argument("--angles must be >= 2");
            cfg.angles = *angles;
        }
        if (n) cfg.n = *n;
        if (seed) cfg.seed = *seed;
        if (margin) {
            if (!(*margin > 0.0 && *margin <= 1.0))
                throw std::invalid_argument("--margin must lie in (0, 1]");
            cfg.margin = *margin;
        }
        if (!mode_str.empty()) {
            if (mode_str == "counting")
                cfg.mode = SimMode::counting;
            else if (mode_str == "field")
                cfg.mode = SimMode::field;
            else
                throw std::invalid_argument("--mode must be counting or field");
        }
        if (!point_str.empty()) {
            double r1 = 0, r2 = 0;
            if (!parse_pair(point_str, &r1, &r2))
                throw std::invalid_argument("--point expects r1,r2");
            cfg.point = {{r1, r2}};
        }
        if (!out_path.empty()) cfg.out = out_path;
        cfg.svg = svg_path;
        cfg.transcript_out = transcript_path;
        cfg.unsafe_raw_keys = unsafe;
        cfg.trials = trials;
        validate_network(cfg.net);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_input;
    }

    CommandResult res;
    try {
        if (region->parsed())
            res = cmd_region(cfg);
        else if (compare->parsed())
            res = cmd_compare(cfg);
        else if (simulate->parsed())
            res = cmd_simulate(cfg);
        else
            res = cmd_verify(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_lp_failure;
    }

    if (!res.output.empty()) {
        if (!cfg.out.empty()) {
            const int rc = write_file(cfg.out, res.output);
            if (rc != exit_ok) return rc;
        } else {
            std::cout << res.output;
        }
    }
    if (!res.svg.empty() && !cfg.svg.empty()) {
        const int rc = write_file(cfg.svg, res.svg);
        if (rc != exit_ok) return rc;
    }
    if (!res.summary.empty()) std::cerr << res.summary;
    return res.code;
}
