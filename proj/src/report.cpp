#include "vmtrack/report.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>

namespace vmtrack {

namespace {

std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string cell(const MetricSummary& m) { return fmt::format("{:.1f} ± {:.1f}", m.mean, m.std); }

}  // namespace

std::string format_report_csv(std::span<const EvalReport> reports, const AggregateReport& summary) {
  std::string out = "sequence,hota,deta,assa,loca,fn,fp,ids\n";
  for (const EvalReport& r : reports) {
    fmt::format_to(std::back_inserter(out), "{},{:.2f},{:.2f},{:.2f},{:.2f},{},{},{}\n", r.sequence, r.hota, r.deta,
                   r.assa, r.loca, r.fn, r.fp, r.ids);
  }
  fmt::format_to(std::back_inserter(out), "mean,{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f}\n", summary.hota.mean,
                 summary.deta.mean, summary.assa.mean, summary.loca.mean, summary.fn.mean, summary.fp.mean,
                 summary.ids.mean);
  fmt::format_to(std::back_inserter(out), "std,{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f}\n", summary.hota.std,
                 summary.deta.std, summary.assa.std, summary.loca.std, summary.fn.std, summary.fp.std,
                 summary.ids.std);
  return out;
}

std::string format_alpha_csv(const EvalReport& report) {
  std::string out = "alpha,hota,deta,assa,loca,tp,fn,fp\n";
  for (const AlphaResult& a : report.per_alpha) {
    fmt::format_to(std::back_inserter(out), "{:.2f},{:.4f},{:.4f},{:.4f},{:.4f},{},{},{}\n", a.alpha, a.hota, a.deta,
                   a.assa, a.loca, a.tp, a.fn, a.fp);
  }
  return out;
}

std::string format_table(std::span<const TableRow> rows) {
  const std::array<std::string, 8> header{"Method", "HOTA", "LocA", "DetA", "AssA", "FP", "FN", "IDs"};
  std::vector<std::array<std::string, 8>> body;
  for (const TableRow& r : rows) {
    const AggregateReport& s = r.summary;
    body.push_back({r.method, cell(s.hota), cell(s.loca), cell(s.deta), cell(s.assa), cell(s.fp), cell(s.fn),
                    cell(s.ids)});
  }
  std::array<std::size_t, 8> width{};
  for (std::size_t c = 0; c < 8; ++c) {
    width[c] = display_width(header[c]);
    for (const auto& row : body) width[c] = std::max(width[c], display_width(row[c]));
  }
  const auto emit = [&](const std::array<std::string, 8>& row) {
    std::string line;
    for (std::size_t c = 0; c < 8; ++c) {
      const std::size_t pad = width[c] - display_width(row[c]);
      if (c == 0) {
        line += row[c] + std::string(pad, ' ');
      } else {
        line += "  " + std::string(pad, ' ') + row[c];
      }
    }
    return line + "\n";
  };
  std::string out = emit(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out += std::string(total + 2 * 7, '-') + "\n";
  for (const auto& row : body) out += emit(row);
  return out;
}

std::string format_compare_csv(std::span<const TableRow> rows) {
  std::string out =
      "method,sequences,hota_mean,hota_std,loca_mean,loca_std,deta_mean,deta_std,assa_mean,assa_std,"
      "fp_mean,fp_std,fn_mean,fn_std,ids_mean,ids_std\n";
  for (const TableRow& r : rows) {
    const AggregateReport& s = r.summary;
    fmt::format_to(std::back_inserter(out),
                   "{},{},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f}\n",
                   r.method, s.sequences, s.hota.mean, s.hota.std, s.loca.mean, s.loca.std, s.deta.mean, s.deta.std,
                   s.assa.mean, s.assa.std, s.fp.mean, s.fp.std, s.fn.mean, s.fn.std, s.ids.mean, s.ids.std);
  }
  return out;
}

}  // namespace vmtrack
