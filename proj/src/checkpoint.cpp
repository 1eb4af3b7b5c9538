#include "scsn/checkpoint.hpp"

#include "scsn/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scsn::models {

namespace {

const char* const kArchKeys[] = {"kind",          "n_channels",     "n_samples",        "n_classes",
                                 "temporal_filters", "temporal_kernel", "pool_width",    "pool_stride",
                                 "dropout",       "n_subjects",     "common_fc_dims",   "separate_fc_dims",
                                 "target_index"};

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("checkpoint header missing field '" + key + "'");
    return it->second;
}

}  // namespace

void save_checkpoint(const Model& model, const std::filesystem::path& path,
                     const std::map<std::string, std::string>& metadata) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const ScsnConfig& c = model.config();
    os << "format_version=1\n"
       << "kind=" << to_string(model.kind()) << '\n'
       << "n_channels=" << c.base.n_channels << '\n'
       << "n_samples=" << c.base.n_samples << '\n'
       << "n_classes=" << c.base.n_classes << '\n'
       << "temporal_filters=" << c.base.temporal_filters << '\n'
       << "temporal_kernel=" << c.base.temporal_kernel << '\n'
       << "pool_width=" << c.base.pool_width << '\n'
       << "pool_stride=" << c.base.pool_stride << '\n'
       << "dropout=" << fmt(c.base.dropout) << '\n'
       << "n_subjects=" << c.n_subjects << '\n'
       << "common_fc_dims=" << join(c.common_fc_dims) << '\n'
       << "separate_fc_dims=" << join(c.separate_fc_dims) << '\n'
       << "target_index=" << c.target_index << '\n';
    for (const auto& [k, v] : metadata) {
        for (const char* reserved : kArchKeys)
            if (k == reserved) throw ContractError("checkpoint metadata key '" + k + "' is reserved");
        if (k.find('=') != std::string::npos || v.find('\n') != std::string::npos) {
            throw ContractError("checkpoint metadata must be single-line key=value");
        }
        os << "meta." << k << '=' << v << '\n';
    }
    os << '\n';
    const ModelParams& p = model.params();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const nn::Tensor& t = p.tensor(i);
        os << p.name(i) << ' ' << t.rank();
        for (auto d : t.shape()) os << ' ' << d;
        os << '\n';
        for (double v : t.values()) {
            auto bits = std::bit_cast<std::uint64_t>(v);
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
            os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
    }
    if (!os) throw FormatError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    bool terminated = false;
    while (std::getline(is, line)) {
        if (line.empty()) {
            terminated = true;
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("malformed checkpoint header line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (!terminated) throw FormatError("checkpoint header not terminated");

    ScsnConfig cfg;
    ModelKind kind;
    try {
        kind = parse_model_kind(need(kv, "kind"));
        cfg.base.n_channels = std::stoul(need(kv, "n_channels"));
        cfg.base.n_samples = std::stoul(need(kv, "n_samples"));
        cfg.base.n_classes = std::stoul(need(kv, "n_classes"));
        cfg.base.temporal_filters = std::stoul(need(kv, "temporal_filters"));
        cfg.base.temporal_kernel = std::stoul(need(kv, "temporal_kernel"));
        cfg.base.pool_width = std::stoul(need(kv, "pool_width"));
        cfg.base.pool_stride = std::stoul(need(kv, "pool_stride"));
        cfg.base.dropout = std::stod(need(kv, "dropout"));
        cfg.n_subjects = std::stoul(need(kv, "n_subjects"));
        cfg.common_fc_dims = parse_dims(need(kv, "common_fc_dims"));
        cfg.separate_fc_dims = parse_dims(need(kv, "separate_fc_dims"));
        cfg.target_index = std::stoul(need(kv, "target_index"));
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const FormatError*>(&e)) throw;
        throw FormatError(std::string("checkpoint header value invalid: ") + e.what());
    }

    Checkpoint ck{make_model_skeleton(kind, cfg), {}};
    for (const auto& [k, v] : kv)
        if (k.rfind("meta.", 0) == 0) ck.metadata[k.substr(5)] = v;

    ModelParams& p = ck.model.params();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::getline(is, line)) throw FormatError("checkpoint truncated before parameter '" + p.name(i) + "'");
        std::istringstream hs(line);
        std::string name;
        std::size_t rank = 0;
        hs >> name >> rank;
        nn::Shape shape(rank);
        for (auto& d : shape) hs >> d;
        if (!hs || name != p.name(i) || shape != p.tensor(i).shape()) {
            throw FormatError("checkpoint block '" + line + "' does not match expected parameter '" + p.name(i) +
                              "' " + nn::shape_string(p.tensor(i).shape()));
        }
        for (double& v : p.tensor(i).values()) {
            std::uint64_t bits = 0;
            if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
                throw FormatError("checkpoint payload truncated in '" + name + "'");
            }
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
            v = std::bit_cast<double>(bits);
        }
    }
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError("checkpoint has trailing bytes");
    return ck;
}

}  // namespace scsn::models
