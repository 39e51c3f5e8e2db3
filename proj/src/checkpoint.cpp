#include "rarl/checkpoint.hpp"

#include "rarl/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rarl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

constexpr char kMagic[8] = {'R', 'A', 'R', 'L', 'C', 'K', 'P', 'T'};

enum class Kind : std::uint8_t { F64 = 0, I64 = 1, Str = 2 };

struct Record {
    Kind kind = Kind::F64;
    std::vector<std::uint64_t> dims;
    std::vector<double> f64;
    std::vector<std::int64_t> i64;
    std::string str;
};

class Writer {
public:
    template <typename T>
    void put(T v)
    {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out_.append(buf, sizeof(T));
    }

    void header(const std::string& name, Kind kind, const std::vector<std::uint64_t>& dims)
    {
        put(static_cast<std::uint16_t>(name.size()));
        out_ += name;
        put(static_cast<std::uint8_t>(kind));
        put(static_cast<std::uint8_t>(dims.size()));
        for (auto d : dims) {
            put(d);
        }
        ++count_;
    }

    void f64(const std::string& name, const std::vector<std::uint64_t>& dims,
             const std::vector<double>& values)
    {
        header(name, Kind::F64, dims);
        for (double v : values) {
            put(v);
        }
    }

    void scalar(const std::string& name, double v) { f64(name, {}, {v}); }

    void i64(const std::string& name, const std::vector<std::int64_t>& values, bool vector = true)
    {
        header(name, Kind::I64,
               vector ? std::vector<std::uint64_t>{values.size()} : std::vector<std::uint64_t>{});
        for (auto v : values) {
            put(v);
        }
    }

    void str(const std::string& name, const std::string& s)
    {
        header(name, Kind::Str, {});
        put(static_cast<std::uint64_t>(s.size()));
        out_ += s;
    }

    std::string finish() const
    {
        std::string result(kMagic, sizeof(kMagic));
        auto append = [&](std::uint32_t v) {
            char buf[4];
            std::memcpy(buf, &v, 4);
            result.append(buf, 4);
        };
        append(kCheckpointVersion);
        append(count_);
        return result + out_;
    }

private:
    std::string out_;
    std::uint32_t count_ = 0;
};

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    template <typename T>
    T get()
    {
        if (pos_ + sizeof(T) > bytes_.size()) {
            throw ContractViolation("checkpoint: truncated data");
        }
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::string take(std::size_t n)
    {
        if (pos_ + n > bytes_.size()) {
            throw ContractViolation("checkpoint: truncated data");
        }
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool at_end() const { return pos_ == bytes_.size(); }

private:
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

void write_network(Writer& w, const std::string& prefix, const QNetwork& net)
{
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const auto& m = net.weights[l];
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(m.size()));
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                values.push_back(m(r, c));
            }
        }
        w.f64(prefix + ".w" + std::to_string(l),
              {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())}, values);
        const auto& b = net.biases[l];
        w.f64(prefix + ".b" + std::to_string(l), {static_cast<std::uint64_t>(b.size())},
              std::vector<double>(b.data(), b.data() + b.size()));
    }
}

const Record& need(const std::map<std::string, Record>& records, const std::string& name,
                   Kind kind)
{
    auto it = records.find(name);
    if (it == records.end()) {
        throw ContractViolation("checkpoint: missing record '" + name + "'");
    }
    if (it->second.kind != kind) {
        throw ContractViolation("checkpoint: record '" + name + "' has the wrong type");
    }
    return it->second;
}

double scalar(const std::map<std::string, Record>& records, const std::string& name)
{
    const Record& r = need(records, name, Kind::F64);
    if (r.f64.size() != 1) {
        throw ContractViolation("checkpoint: record '" + name + "' is not a scalar");
    }
    return r.f64[0];
}

std::int64_t integer(const std::map<std::string, Record>& records, const std::string& name)
{
    const Record& r = need(records, name, Kind::I64);
    if (r.i64.size() != 1) {
        throw ContractViolation("checkpoint: record '" + name + "' is not a scalar");
    }
    return r.i64[0];
}

QNetwork read_network(const std::map<std::string, Record>& records, const std::string& prefix,
                      const std::vector<int>& sizes)
{
    QNetwork net(sizes);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const Record& w = need(records, prefix + ".w" + std::to_string(l), Kind::F64);
        const Record& b = need(records, prefix + ".b" + std::to_string(l), Kind::F64);
        auto& m = net.weights[l];
        if (w.dims.size() != 2 || w.dims[0] != static_cast<std::uint64_t>(m.rows()) ||
            w.dims[1] != static_cast<std::uint64_t>(m.cols()) ||
            b.f64.size() != static_cast<std::size_t>(net.biases[l].size())) {
            throw ContractViolation("checkpoint: layer " + std::to_string(l) + " of " + prefix +
                                    " has the wrong shape");
        }
        std::size_t k = 0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                m(r, c) = w.f64[k++];
            }
        }
        for (Eigen::Index r = 0; r < net.biases[l].size(); ++r) {
            net.biases[l](r) = b.f64[static_cast<std::size_t>(r)];
        }
    }
    return net;
}

}  // namespace

std::string serialize_checkpoint(const AgentCheckpoint& ck)
{
    Writer w;
    const auto& sizes = ck.online.layer_sizes();
    w.i64("layer_sizes", std::vector<std::int64_t>(sizes.begin(), sizes.end()));
    write_network(w, "online", ck.online);
    write_network(w, "target", ck.target);

    const TrainSchedule& s = ck.schedule;
    w.scalar("schedule.gamma", s.gamma);
    w.scalar("schedule.learning_rate", s.learning_rate);
    w.i64("schedule.batch_size", {s.batch_size}, false);
    w.i64("schedule.target_sync_period", {s.target_sync_period}, false);
    w.scalar("schedule.epsilon_start", s.epsilon_start);
    w.scalar("schedule.epsilon_end", s.epsilon_end);
    w.i64("schedule.epsilon_decay_steps", {s.epsilon_decay_steps}, false);
    w.i64("schedule.total_steps", {s.total_steps}, false);
    w.i64("schedule.learning_starts", {s.learning_starts}, false);
    w.i64("schedule.replay_capacity", {s.replay_capacity}, false);
    w.scalar("schedule.grad_clip_norm", s.grad_clip_norm);
    w.scalar("schedule.reward_scale", s.reward_scale);
    w.i64("schedule.hidden_layers",
          std::vector<std::int64_t>(s.hidden_layers.begin(), s.hidden_layers.end()));

    w.i64("position.env_steps", {ck.env_steps}, false);
    w.i64("position.grad_steps", {ck.grad_steps}, false);
    w.i64("position.episodes", {ck.episodes}, false);
    w.i64("seed", {static_cast<std::int64_t>(ck.seed)}, false);
    w.str("rng.exploration", ck.exploration_rng);
    w.str("rng.replay", ck.replay_rng);
    return w.finish();
}

AgentCheckpoint deserialize_checkpoint(const std::string& bytes)
{
    Reader r(bytes);
    if (r.take(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
        throw ContractViolation("checkpoint: bad magic");
    }
    const auto version = r.get<std::uint32_t>();
    if (version != kCheckpointVersion) {
        throw ContractViolation("checkpoint: unsupported version " + std::to_string(version));
    }
    const auto count = r.get<std::uint32_t>();
    std::map<std::string, Record> records;
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto name_len = r.get<std::uint16_t>();
        std::string name = r.take(name_len);
        Record rec;
        const auto kind = r.get<std::uint8_t>();
        if (kind > 2) {
            throw ContractViolation("checkpoint: unknown record kind in '" + name + "'");
        }
        rec.kind = static_cast<Kind>(kind);
        const auto rank = r.get<std::uint8_t>();
        std::uint64_t n = 1;
        for (std::uint8_t d = 0; d < rank; ++d) {
            rec.dims.push_back(r.get<std::uint64_t>());
            n *= rec.dims.back();
        }
        if (n > bytes.size()) {
            throw ContractViolation("checkpoint: record '" + name + "' is larger than the file");
        }
        switch (rec.kind) {
        case Kind::F64:
            for (std::uint64_t k = 0; k < n; ++k) {
                rec.f64.push_back(r.get<double>());
            }
            break;
        case Kind::I64:
            for (std::uint64_t k = 0; k < n; ++k) {
                rec.i64.push_back(r.get<std::int64_t>());
            }
            break;
        case Kind::Str:
            rec.str = r.take(static_cast<std::size_t>(r.get<std::uint64_t>()));
            break;
        }
        records.emplace(std::move(name), std::move(rec));
    }
    if (!r.at_end()) {
        throw ContractViolation("checkpoint: trailing bytes");
    }

    const Record& sizes_rec = need(records, "layer_sizes", Kind::I64);
    std::vector<int> sizes(sizes_rec.i64.begin(), sizes_rec.i64.end());
    if (sizes.size() < 2) {
        throw ContractViolation("checkpoint: layer_sizes needs at least two entries");
    }
    AgentCheckpoint ck;
    ck.online = read_network(records, "online", sizes);
    ck.target = read_network(records, "target", sizes);

    TrainSchedule& s = ck.schedule;
    s.gamma = scalar(records, "schedule.gamma");
    s.learning_rate = scalar(records, "schedule.learning_rate");
    s.batch_size = static_cast<int>(integer(records, "schedule.batch_size"));
    s.target_sync_period = static_cast<int>(integer(records, "schedule.target_sync_period"));
    s.epsilon_start = scalar(records, "schedule.epsilon_start");
    s.epsilon_end = scalar(records, "schedule.epsilon_end");
    s.epsilon_decay_steps = integer(records, "schedule.epsilon_decay_steps");
    s.total_steps = integer(records, "schedule.total_steps");
    s.learning_starts = integer(records, "schedule.learning_starts");
    s.replay_capacity = integer(records, "schedule.replay_capacity");
    s.grad_clip_norm = scalar(records, "schedule.grad_clip_norm");
    s.reward_scale = scalar(records, "schedule.reward_scale");
    const Record& hidden = need(records, "schedule.hidden_layers", Kind::I64);
    s.hidden_layers.assign(hidden.i64.begin(), hidden.i64.end());

    ck.env_steps = integer(records, "position.env_steps");
    ck.grad_steps = integer(records, "position.grad_steps");
    ck.episodes = integer(records, "position.episodes");
    ck.seed = static_cast<std::uint64_t>(integer(records, "seed"));
    ck.exploration_rng = need(records, "rng.exploration", Kind::Str).str;
    ck.replay_rng = need(records, "rng.replay", Kind::Str).str;
    return ck;
}

void save_checkpoint(const AgentCheckpoint& ck, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
    }
    const std::string bytes = serialize_checkpoint(ck);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("failed writing checkpoint: " + path.string());
    }
}

AgentCheckpoint load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return deserialize_checkpoint(ss.str());
    } catch (const ContractViolation& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace rarl
