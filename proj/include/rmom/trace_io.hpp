#pragma once

#include <string>
#include <vector>

#include "rmom/optimizers.hpp"

namespace rmom {

inline constexpr const char* kTraceHeader =
    "k,f_x,f_y,grad_norm_y,beta,a_next,big_a,cond2_margin,dist_x0,wall_ns";

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

std::string trace_to_csv(const std::vector<IterRecord>& rows);
std::vector<IterRecord> trace_from_csv(const std::string& text);

/// {"restarts":[...]}
std::string restarts_to_json(const std::vector<long>& restarts);

/// Writes to a sibling temporary file, then renames over `path`.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace rmom
