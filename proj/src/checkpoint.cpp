#include "newtonflow/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace nwfl {
namespace {

constexpr char magic[4] = {'N', 'W', 'F', 'L'};

template <typename T>
void put(std::ostream& out, const T& x) {
    static_assert(std::is_trivially_copyable_v<T>);
    out.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
    T x;
    in.read(reinterpret_cast<char*>(&x), sizeof(T));
    if (!in) throw io_error(std::string("checkpoint: truncated reading ") + what);
    return x;
}

} // namespace

void save_checkpoint(const std::string& path, const Checkpoint& c) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open checkpoint file '" + path + "' for writing");
    out.write(magic, sizeof(magic));
    put(out, c.version);
    put(out, c.N);
    put(out, c.L);
    put(out, c.kind);
    put(out, c.q);
    put(out, c.t);
    put(out, c.dt);
    put(out, c.dt_next);
    put(out, c.step_count);
    put(out, c.record_index);
    put(out, c.config_digest);
    out.write(reinterpret_cast<const char*>(c.values.data()),
              static_cast<std::streamsize>(c.values.size() * sizeof(double)));
    if (!out) throw io_error("write failure on checkpoint file '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open checkpoint file '" + path + "'");
    char m[4];
    in.read(m, sizeof(m));
    if (!in || std::memcmp(m, magic, sizeof(magic)) != 0)
        throw config_error("checkpoint '" + path + "': bad magic, not a checkpoint file");
    Checkpoint c;
    c.version = get<std::uint32_t>(in, "version");
    if (c.version != Checkpoint::current_version)
        throw config_error("checkpoint '" + path + "': unsupported version " +
                           std::to_string(c.version));
    c.N = get<std::uint32_t>(in, "N");
    c.L = get<double>(in, "L");
    c.kind = get<std::uint8_t>(in, "kind");
    if (c.kind < 1 || c.kind > 3)
        throw config_error("checkpoint '" + path + "': bad nonlinearity kind");
    c.q = get<double>(in, "q");
    c.t = get<double>(in, "t");
    c.dt = get<double>(in, "dt");
    c.dt_next = get<double>(in, "dt_next");
    c.step_count = get<std::uint64_t>(in, "step_count");
    c.record_index = get<std::uint64_t>(in, "record_index");
    c.config_digest = get<std::uint64_t>(in, "config_digest");
    const std::size_t n = static_cast<std::size_t>(c.N) * c.N * c.N;
    c.values.resize(n);
    in.read(reinterpret_cast<char*>(c.values.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw io_error("checkpoint '" + path + "': truncated field data");
    return c;
}

Checkpoint make_checkpoint(const Grid& g, const NonlinearitySpec& spec, const FlowState& st,
                           double dt_next, std::uint64_t record_index, std::uint64_t digest) {
    Checkpoint c;
    c.N = static_cast<std::uint32_t>(g.N);
    c.L = g.L;
    c.kind = static_cast<std::uint8_t>(spec.kind);
    c.q = spec.q;
    c.t = st.t;
    c.dt = st.dt;
    c.dt_next = dt_next;
    c.step_count = st.step_count;
    c.record_index = record_index;
    c.config_digest = digest;
    c.values = st.u.v;
    return c;
}

ResumePoint resume_point(const Checkpoint& c, const Grid& g) {
    if (static_cast<int>(c.N) != g.N || c.L != g.L)
        throw config_error("checkpoint grid (N=" + std::to_string(c.N) +
                           ", L=" + std::to_string(c.L) + ") does not match the configured grid");
    ResumePoint rp;
    rp.state.t = c.t;
    rp.state.u = Field(g, c.values);
    rp.state.dt = c.dt;
    rp.state.step_count = c.step_count;
    rp.dt_next = c.dt_next;
    rp.record_index = c.record_index;
    return rp;
}

} // namespace nwfl
