#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scsn::report {

struct ComparisonRow {
    std::string model;   // baseline, scsn, scsn-mmd
    std::string regime;  // single, multi
    std::string subject;
    double accuracy = 0.0;
};

struct Column {
    std::string model;
    std::string regime;
    std::string label() const { return model + "/" + regime; }
};

struct TableRow {
    std::string subject;  // "mean" for the summary row
    std::vector<std::optional<double>> accuracy;  // per column
    std::vector<std::optional<double>> delta;     // per delta_models entry: multi - single
    std::vector<std::optional<double>> gap;       // per gap_models entry: model/multi - baseline/multi
};

/// Accuracy table with per-subject rows, a mean row, negative-transfer deltas
/// (multi - single per model) and multi-subject gaps versus the baseline.
struct NegativeTransferTable {
    std::vector<Column> columns;
    std::vector<std::string> delta_models;
    std::vector<std::string> gap_models;
    std::vector<TableRow> rows;  // subjects in first-seen order, then "mean"

    const TableRow& mean() const { return rows.back(); }
};

NegativeTransferTable negative_transfer_report(const std::vector<ComparisonRow>& rows);

void write_csv(std::ostream& os, const NegativeTransferTable& table);
void write_text(std::ostream& os, const NegativeTransferTable& table);

}  // namespace scsn::report
