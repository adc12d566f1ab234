#include "pdpsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pdpsim/experiment.hpp"

namespace pdpsim {

using nlohmann::json;

namespace {

struct PooledRow {
    std::vector<uint64_t> seeds;
    long n_trajectories = 0;
    long clicks = 0;
    long no_click = 0;
    double mean = 0.0;
    double se = 0.0;
    std::vector<json> comparisons;
};

PooledRow pool(const std::vector<RunSummary>& group) {
    PooledRow row;
    double weighted_mean = 0.0;
    double var_num = 0.0;
    for (const auto& s : group) {
        row.seeds.push_back(s.seed);
        row.n_trajectories += s.n_trajectories;
        row.clicks += s.first_click.n;
        row.no_click += s.no_click_count;
        weighted_mean += s.first_click.n * s.first_click.mean;
        var_num += static_cast<double>(s.first_click.n) * s.first_click.n * s.first_click.se *
                   s.first_click.se;
        if (!s.comparison.is_null()) row.comparisons.push_back(s.comparison);
    }
    if (row.clicks > 0) {
        row.mean = weighted_mean / row.clicks;
        row.se = std::sqrt(var_num) / row.clicks;
    }
    std::sort(row.seeds.begin(), row.seeds.end());
    return row;
}

std::string seeds_string(const std::vector<uint64_t>& seeds) {
    std::ostringstream os;
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (i) os << "+";
        os << seeds[i];
    }
    return os.str();
}

}  // namespace

std::string merge_report(const std::vector<std::string>& summary_paths,
                         const std::string& csv_out_path) {
    std::map<std::string, std::map<std::string, std::vector<RunSummary>>> by_engine;
    for (const auto& path : summary_paths) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("report: cannot open " + path);
        json j;
        in >> j;
        RunSummary s = RunSummary::from_json(j);
        by_engine[s.engine][s.cfg_hash].push_back(std::move(s));
    }

    std::ostringstream text;
    std::ostringstream csv;
    csv << "engine,config_hash,seeds,n_trajectories,clicks,no_click_fraction,"
           "mean_first_click,se_first_click\n";

    char buf[256];
    for (const auto& [engine, groups] : by_engine) {
        text << "engine: " << engine << "\n";
        std::snprintf(buf, sizeof(buf), "  %-16s  %-14s  %10s  %8s  %9s  %12s  %10s\n", "config",
                      "seeds", "N", "clicks", "no-click", "mean t1", "se");
        text << buf;
        for (const auto& [hash, group] : groups) {
            const PooledRow row = pool(group);
            const double ncf =
                row.n_trajectories > 0
                    ? static_cast<double>(row.no_click) / row.n_trajectories
                    : 0.0;
            std::snprintf(buf, sizeof(buf), "  %-16s  %-14s  %10ld  %8ld  %9.5f  %12.6f  %10.6f\n",
                          hash.c_str(), seeds_string(row.seeds).c_str(), row.n_trajectories,
                          row.clicks, ncf, row.mean, row.se);
            text << buf;
            csv << engine << "," << hash << "," << seeds_string(row.seeds) << ","
                << row.n_trajectories << "," << row.clicks << "," << ncf << "," << row.mean << ","
                << row.se << "\n";
            for (const auto& cmp : row.comparisons)
                text << "    comparison: " << cmp.dump() << "\n";
        }
        text << "\n";
    }

    if (!csv_out_path.empty()) {
        std::ofstream out(csv_out_path);
        if (!out) throw std::runtime_error("report: cannot write " + csv_out_path);
        out << csv.str();
    }
    return text.str();
}

}  // namespace pdpsim
