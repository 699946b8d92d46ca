#include "bamdp/io.hpp"

#include "bamdp/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace bamdp {

using nlohmann::json;

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) return std::to_string(x);
    return std::string(buf, ptr);
}

namespace {

std::string belief_text(const Vector& p) {
    std::string out = "[";
    for (Index i = 0; i < p.size(); ++i) {
        if (i > 0) out += ",";
        out += format_double(p(i));
    }
    out += "]";
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    return out;
}

/// Walk every stored (h, hyperstate) pair of a table in canonical order:
/// timesteps ascending, then layer position (reachable) or state-major
/// grid id (grid).
void for_each_entry(const BamdpModel& model, const BamdpValueTable& table,
                    const std::function<void(int, const Hyperstate&, Index)>& fn) {
    if (table.space->is_grid()) {
        const GridSpace& grid = table.space->grid();
        for (int h = 1; h <= table.max_timestep; ++h) {
            for (Index s = 0; s < model.num_states(); ++s) {
                for (Index b = 0; b < grid.num_beliefs(); ++b) {
                    fn(h, Hyperstate{s, grid.beliefs[static_cast<std::size_t>(b)]},
                       grid.flat_id(s, b));
                }
            }
        }
        return;
    }
    const LayeredSpace& layers = table.space->layered();
    for (int h = 1; h <= table.max_timestep; ++h) {
        const auto& layer = layers.layers[static_cast<std::size_t>(h - 1)];
        for (Index i = 0; i < static_cast<Index>(layer.size()); ++i) {
            fn(h, layer[static_cast<std::size_t>(i)], i);
        }
    }
}

}  // namespace

void export_values_json(const BamdpModel& model, const BamdpValueTable& table,
                        const std::string& path) {
    json values = json::object();
    for_each_entry(model, table, [&](int h, const Hyperstate& x, Index pos) {
        const double val = table.v[static_cast<std::size_t>(h - 1)](pos);
        values[std::to_string(h) + "/" + std::to_string(x.state) + "/" +
               belief_text(x.belief.probs())] = val;
    });
    open_out(path) << values.dump(2) << '\n';
}

void export_values_csv(const BamdpModel& model, const BamdpValueTable& table,
                       const std::string& path) {
    auto out = open_out(path);
    out << "h,s";
    for (Index k = 0; k < model.num_hypotheses(); ++k) out << ",p" << k;
    out << ",v,greedy_action\n";
    for_each_entry(model, table, [&](int h, const Hyperstate& x, Index pos) {
        out << h << ',' << x.state;
        for (Index k = 0; k < x.belief.size(); ++k) out << ',' << format_double(x.belief(k));
        out << ',' << format_double(table.v[static_cast<std::size_t>(h - 1)](pos));
        const bool has_action = h <= static_cast<int>(table.greedy.size());
        out << ',' << (has_action ? table.greedy[static_cast<std::size_t>(h - 1)](pos) : -1)
            << '\n';
    });
}

void export_policy_json(const BamdpModel& model, const BamdpValueTable& table,
                        const std::string& path) {
    json entries = json::array();
    for_each_entry(model, table, [&](int h, const Hyperstate& x, Index pos) {
        if (h > static_cast<int>(table.greedy.size())) return;
        json row;
        row["h"] = h;
        row["s"] = x.state;
        row["p"] = std::vector<double>(x.belief.probs().data(),
                                       x.belief.probs().data() + x.belief.size());
        row["a"] = table.greedy[static_cast<std::size_t>(h - 1)](pos);
        entries.push_back(std::move(row));
    });
    json j;
    j["algorithm"] = table.algorithm_tag;
    j["entries"] = std::move(entries);
    open_out(path) << j.dump(2) << '\n';
}

void save_cover(const DeltaCover& cover, const std::string& path) {
    json j;
    j["delta"] = cover.delta;
    json centers = json::array();
    for (const auto& center : cover.centers) {
        centers.push_back(std::vector<double>(center.probs().data(),
                                              center.probs().data() + center.size()));
    }
    j["centers"] = std::move(centers);
    j["certified_radius"] = cover.certified_radius;
    j["seed"] = cover.certification_seed;
    open_out(path) << j.dump(2) << '\n';
}

DeltaCover load_cover(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        DeltaCover cover;
        cover.delta = j.at("delta").get<double>();
        for (const auto& row : j.at("centers")) {
            Vector p = Vector::Zero(static_cast<Index>(row.size()));
            for (Index i = 0; i < p.size(); ++i) p(i) = row.at(i).get<double>();
            cover.centers.emplace_back(std::move(p));
        }
        cover.certified_radius = j.at("certified_radius").get<double>();
        cover.certification_seed = j.at("seed").get<std::uint64_t>();
        cover.validate();
        return cover;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace {

json report_to_json(const BoundReport& report) {
    json j;
    j["proposition"] = proposition_name(report.proposition);
    j["pass"] = report.pass;
    j["max_ratio"] = report.max_ratio;
    j["instance"] = report.instance_digest;
    if (report.epsilon_used) {
        j["epsilon"] = *report.epsilon_used;
        j["epsilon_semantics"] = report.epsilon_semantics;
    }
    if (report.delta_used) j["delta"] = *report.delta_used;
    if (!report.weighting.empty()) j["weighting"] = report.weighting;
    json rows = json::array();
    for (const auto& row : report.per_timestep) {
        json r;
        r["h"] = row.h;
        r["gap"] = row.measured_gap;
        r["bound"] = row.bound_value;
        r["vacuous"] = row.vacuous;
        rows.push_back(std::move(r));
    }
    j["per_timestep"] = std::move(rows);
    return j;
}

}  // namespace

void save_bound_reports_json(const std::vector<BoundReport>& reports, const std::string& path) {
    json j = json::array();
    for (const auto& report : reports) j.push_back(report_to_json(report));
    open_out(path) << j.dump(2) << '\n';
}

void save_bound_reports_csv(const std::vector<BoundReport>& reports, const std::string& path) {
    auto out = open_out(path);
    out << "prop,h,delta,gap,bound,ratio,vacuous\n";
    for (const auto& report : reports) {
        for (const auto& row : report.per_timestep) {
            double ratio = 0.0;
            if (row.bound_value > 0.0) {
                ratio = row.measured_gap / row.bound_value;
            } else if (row.measured_gap > kValueTol) {
                ratio = std::numeric_limits<double>::infinity();
            }
            out << proposition_name(report.proposition) << ',' << row.h << ','
                << (report.delta_used ? format_double(*report.delta_used) : "") << ','
                << format_double(row.measured_gap) << ',' << format_double(row.bound_value)
                << ',' << format_double(ratio) << ',' << (row.vacuous ? 1 : 0) << '\n';
        }
    }
}

void write_text_file(const std::string& path, const std::string& contents) {
    open_out(path) << contents;
}

}  // namespace bamdp
