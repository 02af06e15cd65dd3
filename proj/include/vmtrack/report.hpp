#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vmtrack/hota.hpp"

namespace vmtrack {

/// One row per sequence, then "mean" and "std" rows:
///   sequence,hota,deta,assa,loca,fn,fp,ids
[[nodiscard]] std::string format_report_csv(std::span<const EvalReport> reports, const AggregateReport& summary);

/// Per-alpha breakdown of a single sequence: alpha,hota,deta,assa,loca,tp,fn,fp
[[nodiscard]] std::string format_alpha_csv(const EvalReport& report);

struct TableRow {
  std::string method;
  AggregateReport summary;
};

/// Aligned plain-text table with "mean ± std" cells, one row per method.
[[nodiscard]] std::string format_table(std::span<const TableRow> rows);

/// Machine-readable companion of format_table.
[[nodiscard]] std::string format_compare_csv(std::span<const TableRow> rows);

}  // namespace vmtrack
