#pragma once

#include "bamdp/abstraction.hpp"
#include "bamdp/bamdp.hpp"
#include "bamdp/verification.hpp"

#include <string>
#include <vector>

namespace bamdp {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

/// Value table as a JSON object mapping "h/s/[p...]" keys to values.
void export_values_json(const BamdpModel& model, const BamdpValueTable& table,
                        const std::string& path);

/// Value table as tidy CSV: h, s, belief components, v, greedy_action
/// (-1 where no action was backed up).
void export_values_csv(const BamdpModel& model, const BamdpValueTable& table,
                       const std::string& path);

/// Greedy policy as JSON, ordered by the model's canonical enumeration.
void export_policy_json(const BamdpModel& model, const BamdpValueTable& table,
                        const std::string& path);

void save_cover(const DeltaCover& cover, const std::string& path);
DeltaCover load_cover(const std::string& path);

void save_bound_reports_json(const std::vector<BoundReport>& reports, const std::string& path);

/// Bound reports as CSV with columns prop, h, delta, gap, bound, ratio, vacuous.
void save_bound_reports_csv(const std::vector<BoundReport>& reports, const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace bamdp
