#include "scsn/models.hpp"

#include "scsn/errors.hpp"
#include "scsn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace scsn::models {

using nn::Tape;
using nn::Tensor;
using nn::Var;

void BaselineConfig::validate() const {
    if (!n_channels || !n_samples || !n_classes || !temporal_filters || !temporal_kernel || !pool_width ||
        !pool_stride) {
        throw ParameterError("model config counts must be positive");
    }
    if (n_classes < 2) throw ParameterError("model needs at least 2 classes");
    if (temporal_kernel > n_samples) {
        throw ParameterError("temporal kernel (" + std::to_string(temporal_kernel) + ") longer than crop (" +
                             std::to_string(n_samples) + " samples)");
    }
    if (pool_width > conv_length()) {
        throw ParameterError("pool width " + std::to_string(pool_width) + " exceeds temporal conv output length " +
                             std::to_string(conv_length()));
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ParameterError("dropout must lie in [0, 1)");
}

void ScsnConfig::validate() const {
    base.validate();
    if (n_subjects < 1) throw ParameterError("need at least one subject branch");
    if (separate_fc_dims.size() != 3) throw ParameterError("SCSN needs exactly 3 separate dense layers");
    if (common_fc_dims.empty()) throw ParameterError("SCSN needs a common dense block");
    for (auto d : common_fc_dims)
        if (!d) throw ParameterError("dense widths must be positive");
    for (auto d : separate_fc_dims)
        if (!d) throw ParameterError("dense widths must be positive");
    if (target_index >= n_subjects) throw ParameterError("target index out of range");
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Baseline: return "baseline";
        case ModelKind::Scsn: return "scsn";
        case ModelKind::ScsnMmd: return "scsn-mmd";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "baseline") return ModelKind::Baseline;
    if (name == "scsn") return ModelKind::Scsn;
    if (name == "scsn-mmd" || name == "scsn_mmd") return ModelKind::ScsnMmd;
    throw ParameterError("unknown model kind '" + name + "'");
}

ModelParams::ModelParams(const ModelParams& other) : entries_(other.entries_), index_(other.index_) {}

ModelParams& ModelParams::operator=(const ModelParams& other) {
    entries_ = other.entries_;
    index_ = other.index_;
    return *this;
}

Tensor& ModelParams::add(const std::string& group, const std::string& name, Tensor value) {
    if (index_.count(name)) throw ContractError("duplicate parameter name '" + name + "'");
    index_[name] = entries_.size();
    entries_.push_back({group, name, std::move(value)});
    return entries_.back().value;
}

Tensor& ModelParams::at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw LookupError("no parameter named '" + name + "'");
    return entries_[it->second].value;
}

const Tensor& ModelParams::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw LookupError("no parameter named '" + name + "'");
    return entries_[it->second].value;
}

std::vector<std::string> ModelParams::groups() const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (std::find(out.begin(), out.end(), e.group) == out.end()) out.push_back(e.group);
    return out;
}

std::size_t ModelParams::scalar_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.value.size();
    return n;
}

std::size_t ModelParams::scalar_count(const std::string& group) const {
    std::size_t n = 0;
    for (const auto& e : entries_)
        if (e.group == group) n += e.value.size();
    return n;
}

std::vector<Tensor*> ModelParams::tensors() {
    std::vector<Tensor*> out;
    for (auto& e : entries_) out.push_back(&e.value);
    return out;
}

void ModelParams::zero_grad() {
    for (auto& e : entries_) e.value.zero_grad();
}

std::string Model::branch_group(std::size_t branch) const {
    if (branch >= n_branches()) throw ContractError("branch index out of range");
    return kind_ == ModelKind::Baseline ? "shared" : "subject" + std::to_string(branch);
}

namespace {

std::string bname(std::size_t branch, const std::string& leaf) { return "b" + std::to_string(branch) + "." + leaf; }

// Adds every parameter of the architecture; `init` fills weights.
void add_all(Model& m, ModelParams& p, const ScsnConfig& cfg, ModelKind kind,
             const std::function<void(Tensor&, std::mt19937_64*)>& init, std::uint64_t seed, bool seeded) {
    const auto& b = cfg.base;
    auto rng_for = [&](std::uint64_t tag) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(tag)};
        return std::mt19937_64(seq);
    };
    auto weight = [&](const std::string& group, const std::string& name, nn::Shape shape, std::mt19937_64& rng) {
        Tensor& t = p.add(group, name, Tensor(std::move(shape)));
        init(t, seeded ? &rng : nullptr);
    };
    auto bias = [&](const std::string& group, const std::string& name, std::size_t n) {
        p.add(group, name, Tensor({n}, 0.0));
    };

    const bool multi = kind != ModelKind::Baseline;
    if (multi) {
        auto rng = rng_for(0x5A4ED);
        std::size_t in = b.feature_dim();
        for (std::size_t l = 0; l < cfg.common_fc_dims.size(); ++l) {
            const std::string n = "common" + std::to_string(l);
            weight("shared", n + ".w", {cfg.common_fc_dims[l], in}, rng);
            bias("shared", n + ".b", cfg.common_fc_dims[l]);
            in = cfg.common_fc_dims[l];
        }
    }
    for (std::size_t i = 0; i < cfg.n_subjects; ++i) {
        const std::string group = m.branch_group(i);
        auto rng = rng_for(1000 + i);
        weight(group, bname(i, "temporal"), {b.temporal_filters, b.temporal_kernel}, rng);
        weight(group, bname(i, "spatial"), {b.temporal_filters, b.temporal_filters, b.n_channels}, rng);
        std::size_t in = b.feature_dim();
        if (multi) {
            in = cfg.common_fc_dims.back();
            for (std::size_t l = 0; l < cfg.separate_fc_dims.size(); ++l) {
                const std::string n = "sep" + std::to_string(l);
                weight(group, bname(i, n + ".w"), {cfg.separate_fc_dims[l], in}, rng);
                bias(group, bname(i, n + ".b"), cfg.separate_fc_dims[l]);
                in = cfg.separate_fc_dims[l];
            }
        }
        weight(group, bname(i, "cls.w"), {b.n_classes, in}, rng);
        bias(group, bname(i, "cls.b"), b.n_classes);
    }
}

void glorot(Tensor& t, std::mt19937_64* rng) {
    if (!rng) return;
    const double fan_out = static_cast<double>(t.dim(0));
    const double fan_in = static_cast<double>(t.size()) / fan_out;
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (double& v : t.values()) v = u(*rng);
}

ScsnConfig baseline_arch(const BaselineConfig& cfg) {
    ScsnConfig arch;
    arch.base = cfg;
    arch.n_subjects = 1;
    arch.common_fc_dims.clear();
    arch.separate_fc_dims.clear();
    arch.target_index = 0;
    return arch;
}

using Binder = std::function<Var(const std::string&)>;

// Shallow path for one branch: [rows x C x T] -> flattened log-power features.
Var shallow(Tape& tape, const ScsnConfig& cfg, const Binder& bind, Var x, std::size_t branch, bool training,
            std::mt19937_64* rng) {
    const auto& b = cfg.base;
    Var h = nn::conv_time(tape, x, bind(bname(branch, "temporal")));
    h = nn::conv_space(tape, h, bind(bname(branch, "spatial")));
    h = nn::square(tape, h);
    h = nn::mean_pool(tape, h, b.pool_width, b.pool_stride);
    h = nn::log_floor(tape, h);
    h = nn::flatten(tape, h);
    if (training && b.dropout > 0.0) h = nn::dropout(tape, h, b.dropout, true, *rng);
    return h;
}

BranchOutput branch_forward(Tape& tape, const Model& model, const Binder& bind, Var x, std::size_t branch,
                            bool training, std::mt19937_64* rng) {
    const ScsnConfig& cfg = model.config();
    BranchOutput out;
    Var h = shallow(tape, cfg, bind, x, branch, training, rng);
    if (model.kind() != ModelKind::Baseline) {
        for (std::size_t l = 0; l < cfg.common_fc_dims.size(); ++l) {
            const std::string n = "common" + std::to_string(l);
            h = nn::tanh(tape, nn::dense(tape, h, bind(n + ".w"), bind(n + ".b")));
        }
        for (std::size_t l = 0; l < cfg.separate_fc_dims.size(); ++l) {
            const std::string n = "sep" + std::to_string(l);
            h = nn::tanh(tape, nn::dense(tape, h, bind(bname(branch, n + ".w")), bind(bname(branch, n + ".b"))));
            out.features.push_back(h);
        }
    }
    out.logits = nn::dense(tape, h, bind(bname(branch, "cls.w")), bind(bname(branch, "cls.b")));
    return out;
}

void check_input(const Model& model, const Tensor& x) {
    const auto& b = model.config().base;
    if (x.rank() != 3 || x.dim(1) != b.n_channels || x.dim(2) != b.n_samples) {
        throw ShapeError("model input must be [rows x " + std::to_string(b.n_channels) + " x " +
                         std::to_string(b.n_samples) + "], got " + nn::shape_string(x.shape()));
    }
}

}  // namespace

Model build_baseline(const BaselineConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Model m;
    m.kind_ = ModelKind::Baseline;
    m.cfg_ = baseline_arch(cfg);
    add_all(m, m.params_, m.cfg_, m.kind_, glorot, seed, true);
    return m;
}

Model build_scsn(const ScsnConfig& cfg, std::uint64_t seed, ModelKind kind) {
    if (kind == ModelKind::Baseline) throw ParameterError("build_scsn called with baseline kind");
    cfg.validate();
    Model m;
    m.kind_ = kind;
    m.cfg_ = cfg;
    add_all(m, m.params_, m.cfg_, m.kind_, glorot, seed, true);
    return m;
}

Model make_model_skeleton(ModelKind kind, const ScsnConfig& cfg) {
    Model m;
    m.kind_ = kind;
    m.cfg_ = kind == ModelKind::Baseline ? baseline_arch(cfg.base) : cfg;
    if (kind == ModelKind::Baseline) m.cfg_.base.validate();
    else m.cfg_.validate();
    add_all(m, m.params_, m.cfg_, m.kind_, glorot, 0, false);
    return m;
}

std::vector<BranchOutput> forward_train(Model& model, Tape& tape, std::span<const Tensor> inputs, bool training,
                                        std::mt19937_64& rng) {
    if (inputs.size() != model.n_branches()) {
        throw ContractError("forward_train needs one sub-batch per branch: got " + std::to_string(inputs.size()) +
                            ", model has " + std::to_string(model.n_branches()));
    }
    std::map<std::string, Var> bound;
    Binder bind = [&](const std::string& name) {
        auto it = bound.find(name);
        if (it != bound.end()) return it->second;
        Var v = tape.parameter(model.params().at(name));
        bound.emplace(name, v);
        return v;
    };
    std::vector<BranchOutput> out;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].empty()) throw ContractError("missing sub-batch for branch " + std::to_string(i));
        check_input(model, inputs[i]);
        Var x = tape.constant_ref(inputs[i]);
        out.push_back(branch_forward(tape, model, bind, x, i, training, &rng));
    }
    return out;
}

Tensor forward_infer(const Model& model, const Tensor& crops, std::size_t branch) {
    if (branch >= model.n_branches()) {
        throw ContractError("branch " + std::to_string(branch) + " out of range for a " +
                            std::to_string(model.n_branches()) + "-branch model");
    }
    check_input(model, crops);
    Tape tape;
    Binder bind = [&](const std::string& name) { return tape.constant_ref(model.params().at(name)); };
    BranchOutput o = branch_forward(tape, model, bind, tape.constant_ref(crops), branch, false, nullptr);
    Tensor probs = tape.value(o.logits);
    const std::size_t k = probs.dim(1);
    for (std::size_t r = 0; r < probs.dim(0); ++r) {
        auto p = nn::softmax(probs.values().subspan(r * k, k));
        std::copy(p.begin(), p.end(), probs.values().begin() + static_cast<std::ptrdiff_t>(r * k));
    }
    return probs;
}

}  // namespace scsn::models
