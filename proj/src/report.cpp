#include "scsn/report.hpp"

#include "scsn/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <ostream>

namespace scsn::report {

namespace {

const std::vector<std::string> kModelOrder = {"baseline", "scsn", "scsn-mmd"};
const std::vector<std::string> kRegimeOrder = {"single", "multi"};

std::size_t rank_of(const std::vector<std::string>& order, const std::string& v) {
    auto it = std::find(order.begin(), order.end(), v);
    return static_cast<std::size_t>(it - order.begin());
}

std::optional<double> diff(std::optional<double> a, std::optional<double> b) {
    if (a && b) return *a - *b;
    return std::nullopt;
}

std::string cell(std::optional<double> v, const char* f) {
    if (!v) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, f, *v);
    return buf;
}

}  // namespace

NegativeTransferTable negative_transfer_report(const std::vector<ComparisonRow>& rows) {
    NegativeTransferTable t;
    std::vector<std::string> subjects;
    for (const ComparisonRow& r : rows) {
        if (!(r.accuracy >= 0.0 && r.accuracy <= 1.0)) throw ContractError("accuracy must lie in [0, 1]");
        if (std::find(subjects.begin(), subjects.end(), r.subject) == subjects.end()) subjects.push_back(r.subject);
        auto same = [&](const Column& c) { return c.model == r.model && c.regime == r.regime; };
        if (std::none_of(t.columns.begin(), t.columns.end(), same)) t.columns.push_back({r.model, r.regime});
    }
    std::stable_sort(t.columns.begin(), t.columns.end(), [](const Column& a, const Column& b) {
        const auto ma = rank_of(kModelOrder, a.model), mb = rank_of(kModelOrder, b.model);
        if (ma != mb) return ma < mb;
        if (a.model != b.model) return a.model < b.model;
        return rank_of(kRegimeOrder, a.regime) < rank_of(kRegimeOrder, b.regime);
    });

    auto column_of = [&](const std::string& model, const std::string& regime) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            if (t.columns[i].model == model && t.columns[i].regime == regime) return i;
        return std::nullopt;
    };
    for (const Column& c : t.columns) {
        if (c.regime == "multi" && column_of(c.model, "single")) t.delta_models.push_back(c.model);
        if (c.regime == "multi" && c.model != "baseline" && column_of("baseline", "multi")) {
            t.gap_models.push_back(c.model);
        }
    }

    auto fill_derived = [&](TableRow& row) {
        for (const std::string& m : t.delta_models)
            row.delta.push_back(diff(row.accuracy[*column_of(m, "multi")], row.accuracy[*column_of(m, "single")]));
        for (const std::string& m : t.gap_models) {
            row.gap.push_back(
                diff(row.accuracy[*column_of(m, "multi")], row.accuracy[*column_of("baseline", "multi")]));
        }
    };

    for (const std::string& s : subjects) {
        TableRow row;
        row.subject = s;
        row.accuracy.assign(t.columns.size(), std::nullopt);
        for (const ComparisonRow& r : rows)
            if (r.subject == s) row.accuracy[*column_of(r.model, r.regime)] = r.accuracy;
        fill_derived(row);
        t.rows.push_back(std::move(row));
    }

    TableRow mean;
    mean.subject = "mean";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        double s = 0.0;
        std::size_t n = 0;
        for (const TableRow& r : t.rows)
            if (r.accuracy[c]) {
                s += *r.accuracy[c];
                ++n;
            }
        mean.accuracy.push_back(n ? std::optional<double>(s / static_cast<double>(n)) : std::nullopt);
    }
    fill_derived(mean);
    t.rows.push_back(std::move(mean));
    return t;
}

void write_csv(std::ostream& os, const NegativeTransferTable& t) {
    os << "subject";
    for (const Column& c : t.columns) os << ',' << c.label();
    for (const std::string& m : t.delta_models) os << ",delta_" << m;
    for (const std::string& m : t.gap_models) os << ",gap_" << m << "_vs_baseline";
    os << '\n';
    for (const TableRow& r : t.rows) {
        os << r.subject;
        for (auto v : r.accuracy) os << ',' << cell(v, "%.6f");
        for (auto v : r.delta) os << ',' << cell(v, "%+.6f");
        for (auto v : r.gap) os << ',' << cell(v, "%+.6f");
        os << '\n';
    }
}

void write_text(std::ostream& os, const NegativeTransferTable& t) {
    std::vector<std::string> header{"subject"};
    for (const Column& c : t.columns) header.push_back(c.label());
    for (const std::string& m : t.delta_models) header.push_back("delta " + m);
    for (const std::string& m : t.gap_models) header.push_back("gap " + m);
    std::vector<std::vector<std::string>> cells{header};
    for (const TableRow& r : t.rows) {
        std::vector<std::string> line{r.subject};
        for (auto v : r.accuracy) line.push_back(cell(v, "%.3f"));
        for (auto v : r.delta) line.push_back(cell(v, "%+.3f"));
        for (auto v : r.gap) line.push_back(cell(v, "%+.3f"));
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& line : cells)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i) os << "  ";
            if (i == 0) os << std::left;
            else os << std::right;
            os << std::setw(static_cast<int>(width[i])) << line[i];
        }
        os << '\n';
    }
}

}  // namespace scsn::report
