#include "scsn/mmd.hpp"

#include "scsn/errors.hpp"
#include "scsn/ops.hpp"

#include <cmath>
#include <map>

namespace scsn::mmd {

namespace {

void check_set(const Tensor& t, const char* what) {
    if (t.rank() != 2) throw ShapeError(std::string(what) + " must be a [rows x dim] feature set");
}

void check_pair(const Tensor& x, const Tensor& y) {
    check_set(x, "X");
    check_set(y, "Y");
    if (x.dim(1) != y.dim(1)) {
        throw ShapeError("feature dimension mismatch: " + std::to_string(x.dim(1)) + " vs " +
                         std::to_string(y.dim(1)));
    }
}

std::span<const double> row(const Tensor& t, std::size_t r) { return t.values().subspan(r * t.dim(1), t.dim(1)); }

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double resolve_sigma2(const Tensor& x, const Tensor& y, const KernelSpec& kernel) {
    if (kernel.rule == BandwidthRule::Fixed) {
        if (!(kernel.sigma2 > 0.0)) throw ParameterError("kernel sigma2 must be positive");
        return kernel.sigma2;
    }
    return bandwidth_mean_l2(x, y);
}

// Rows of `labels` grouped by class.
std::map<std::size_t, std::vector<std::size_t>> rows_by_class(std::span<const std::size_t> labels) {
    std::map<std::size_t, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
    return out;
}

Tensor take_rows(const Tensor& t, const std::vector<std::size_t>& rows) {
    const std::size_t dim = t.dim(1);
    Tensor out({rows.size(), dim});
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = 0; j < dim; ++j) out[r * dim + j] = t[rows[r] * dim + j];
    return out;
}

void check_layers(std::size_t nt, std::size_t ns) {
    if (nt != 3 || ns != 3) {
        throw ContractError("layered_class_mmd expects exactly 3 layers per side, got " + std::to_string(nt) +
                            " and " + std::to_string(ns));
    }
}

}  // namespace

void MmdConfig::validate() const {
    if (lambda < 0.0) throw ContractError("MMD lambda must be non-negative");
    double s = 0.0;
    for (double w : layer_weights) s += w;
    if (std::abs(s - 1.0) > 1e-12) throw ContractError("MMD layer weights must sum to 1");
}

double bandwidth_mean_l2(const Tensor& x, const Tensor& y) {
    check_pair(x, y);
    if (x.dim(0) == 0 || y.dim(0) == 0) throw ContractError("bandwidth needs non-empty sets");
    std::vector<std::span<const double>> pts;
    for (std::size_t i = 0; i < x.dim(0); ++i) pts.push_back(row(x, i));
    for (std::size_t i = 0; i < y.dim(0); ++i) pts.push_back(row(y, i));
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            total += std::sqrt(sq_dist(pts[i], pts[j]));
            ++pairs;
        }
    const double mean = total / static_cast<double>(pairs);
    return mean > 0.0 ? mean : 1.0;
}

double rbf(std::span<const double> a, std::span<const double> b, double sigma2) {
    return std::exp(-sq_dist(a, b) / (2.0 * sigma2));
}

double mmd2_biased(const Tensor& x, const Tensor& y, const KernelSpec& kernel) {
    check_pair(x, y);
    const std::size_t m = x.dim(0), n = y.dim(0);
    const double s2 = resolve_sigma2(x, y, kernel);
    double kxx = 0.0, kyy = 0.0, kxy = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) kxx += rbf(row(x, i), row(x, j), s2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) kyy += rbf(row(y, i), row(y, j), s2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) kxy += rbf(row(x, i), row(y, j), s2);
    const double dm = static_cast<double>(m), dn = static_cast<double>(n);
    return kxx / (dm * dm) + kyy / (dn * dn) - 2.0 * kxy / (dm * dn);
}

Mmd2Value mmd2_biased_with_grad(const Tensor& x, const Tensor& y, const KernelSpec& kernel) {
    check_pair(x, y);
    const std::size_t m = x.dim(0), n = y.dim(0), dim = x.dim(1);
    Mmd2Value out;
    out.sigma2 = resolve_sigma2(x, y, kernel);
    out.value = mmd2_biased(x, y, KernelSpec{BandwidthRule::Fixed, out.sigma2});
    out.grad_x.assign(x.size(), 0.0);
    out.grad_y.assign(y.size(), 0.0);

    const double s2 = out.sigma2;
    const double dm = static_cast<double>(m), dn = static_cast<double>(n);
    // d k(a,b) / d a = -k(a,b) (a - b) / sigma2
    auto accumulate = [&](const Tensor& a, std::size_t i, const Tensor& b, std::size_t j, double coeff,
                          std::vector<double>& ga) {
        const double k = rbf(row(a, i), row(b, j), s2);
        const double c = -coeff * k / s2;
        for (std::size_t d = 0; d < dim; ++d) ga[i * dim + d] += c * (a[i * dim + d] - b[j * dim + d]);
    };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) accumulate(x, i, x, j, 2.0 / (dm * dm), out.grad_x);
        for (std::size_t j = 0; j < n; ++j) accumulate(x, i, y, j, -2.0 / (dm * dn), out.grad_x);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) accumulate(y, i, y, j, 2.0 / (dn * dn), out.grad_y);
        for (std::size_t j = 0; j < m; ++j) accumulate(y, i, x, j, -2.0 / (dm * dn), out.grad_y);
    }
    if (kernel.rule == BandwidthRule::Fixed) return out;

    // Bandwidth path: d value / d sigma2, then d sigma2 / d point.
    auto dk_ds2 = [&](const Tensor& a, std::size_t i, const Tensor& b, std::size_t j) {
        const double d2 = sq_dist(row(a, i), row(b, j));
        return std::exp(-d2 / (2.0 * s2)) * d2 / (2.0 * s2 * s2);
    };
    double dv = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) dv += dk_ds2(x, i, x, j) / (dm * dm);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dv += dk_ds2(y, i, y, j) / (dn * dn);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) dv -= 2.0 * dk_ds2(x, i, y, j) / (dm * dn);

    const std::size_t total = m + n;
    const double pairs = static_cast<double>(total * (total - 1) / 2);
    if (pairs == 0.0 || dv == 0.0) return out;
    auto point = [&](std::size_t p) { return p < m ? row(x, p) : row(y, p - m); };
    auto grad_of = [&](std::size_t p) { return p < m ? out.grad_x.data() + p * dim : out.grad_y.data() + (p - m) * dim; };
    for (std::size_t p = 0; p < total; ++p)
        for (std::size_t q = p + 1; q < total; ++q) {
            const auto a = point(p), b = point(q);
            const double dist = std::sqrt(sq_dist(a, b));
            if (dist == 0.0) continue;
            const double c = dv / (pairs * dist);
            double* ga = grad_of(p);
            double* gb = grad_of(q);
            for (std::size_t d = 0; d < dim; ++d) {
                ga[d] += c * (a[d] - b[d]);
                gb[d] -= c * (a[d] - b[d]);
            }
        }
    return out;
}

double layered_class_mmd(std::span<const Tensor> target_feats, std::span<const Tensor> source_feats,
                         std::span<const std::size_t> target_labels, std::span<const std::size_t> source_labels,
                         const MmdConfig& cfg) {
    check_layers(target_feats.size(), source_feats.size());
    cfg.validate();
    double total = 0.0;
    for (std::size_t l = 0; l < 3; ++l) {
        const Tensor& xt = target_feats[l];
        const Tensor& xs = source_feats[l];
        check_pair(xt, xs);
        if (xt.dim(0) != target_labels.size() || xs.dim(0) != source_labels.size()) {
            throw ShapeError("labels are not aligned with feature rows");
        }
        double layer = 0.0;
        if (cfg.class_matched) {
            const auto tc = rows_by_class(target_labels);
            const auto sc = rows_by_class(source_labels);
            std::size_t shared = 0;
            for (const auto& [label, trows] : tc) {
                auto it = sc.find(label);
                if (it == sc.end()) continue;
                layer += mmd2_biased(take_rows(xt, trows), take_rows(xs, it->second));
                ++shared;
            }
            if (shared) layer /= static_cast<double>(shared);
        } else {
            layer = mmd2_biased(xt, xs);
        }
        total += cfg.layer_weights[l] * layer;
    }
    return total;
}

double transfer_loss(double classification_loss, std::span<const double> per_source_mmd, double lambda) {
    if (lambda < 0.0) throw ContractError("transfer_loss: lambda must be non-negative");
    double s = 0.0;
    for (double v : per_source_mmd) s += v;
    return classification_loss + lambda * s;
}

Var mmd2_biased(nn::Tape& tape, Var x, Var y, const KernelSpec& kernel) {
    Mmd2Value r = mmd2_biased_with_grad(tape.value(x), tape.value(y), kernel);
    return tape.record(Tensor({1}, {r.value}), {x, y},
                       [x, y, gx = std::move(r.grad_x), gy = std::move(r.grad_y)](nn::Tape& t,
                                                                                  std::span<const double> g) {
                           if (t.requires_grad(x)) {
                               auto dst = t.grad(x);
                               for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[0] * gx[i];
                           }
                           if (t.requires_grad(y)) {
                               auto dst = t.grad(y);
                               for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[0] * gy[i];
                           }
                       });
}

Var layered_class_mmd(nn::Tape& tape, std::span<const Var> target_feats, std::span<const Var> source_feats,
                      std::span<const std::size_t> target_labels, std::span<const std::size_t> source_labels,
                      const MmdConfig& cfg) {
    check_layers(target_feats.size(), source_feats.size());
    cfg.validate();
    std::vector<Var> layers;
    for (std::size_t l = 0; l < 3; ++l) {
        check_pair(tape.value(target_feats[l]), tape.value(source_feats[l]));
        if (tape.value(target_feats[l]).dim(0) != target_labels.size() ||
            tape.value(source_feats[l]).dim(0) != source_labels.size()) {
            throw ShapeError("labels are not aligned with feature rows");
        }
        if (!cfg.class_matched) {
            layers.push_back(mmd2_biased(tape, target_feats[l], source_feats[l]));
            continue;
        }
        const auto tc = rows_by_class(target_labels);
        const auto sc = rows_by_class(source_labels);
        std::vector<Var> per_class;
        for (const auto& [label, trows] : tc) {
            auto it = sc.find(label);
            if (it == sc.end()) continue;
            Var xt = nn::gather_rows(tape, target_feats[l], trows);
            Var xs = nn::gather_rows(tape, source_feats[l], it->second);
            per_class.push_back(mmd2_biased(tape, xt, xs));
        }
        if (per_class.empty()) {
            layers.push_back(tape.constant(Tensor({1}, 0.0)));
        } else {
            std::vector<double> w(per_class.size(), 1.0 / static_cast<double>(per_class.size()));
            layers.push_back(nn::weighted_sum(tape, per_class, w));
        }
    }
    return nn::weighted_sum(tape, layers, cfg.layer_weights);
}

Var transfer_loss(nn::Tape& tape, Var classification_loss, std::span<const Var> per_source_mmd, double lambda) {
    if (lambda < 0.0) throw ContractError("transfer_loss: lambda must be non-negative");
    if (per_source_mmd.empty()) return classification_loss;
    std::vector<Var> terms{classification_loss};
    std::vector<double> weights{1.0};
    for (Var v : per_source_mmd) {
        terms.push_back(v);
        weights.push_back(lambda);
    }
    return nn::weighted_sum(tape, terms, weights);
}

}  // namespace scsn::mmd
