#include "hetgcn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "hetgcn/errors.hpp"

namespace hetgcn {

namespace {

constexpr char kMagic[8] = {'H', 'G', 'C', 'N', 'C', 'K', 'P', '1'};

void write_i64(std::ostream& out, std::int64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }

std::int64_t read_i64(std::istream& in) {
    std::int64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw ValidationError("checkpoint: truncated file");
    return v;
}

void write_string(std::ostream& out, const std::string& s) {
    write_i64(out, static_cast<std::int64_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    const std::int64_t len = read_i64(in);
    if (len < 0 || len > 1 << 20) throw ValidationError("checkpoint: bad string length");
    std::string s(static_cast<std::size_t>(len), '\0');
    in.read(s.data(), len);
    if (!in) throw ValidationError("checkpoint: truncated file");
    return s;
}

void write_matrix(std::ostream& out, const Matrix& m) {
    write_i64(out, m.rows());
    write_i64(out, m.cols());
    out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(double)) * m.size());
}

Matrix read_matrix(std::istream& in) {
    const std::int64_t rows = read_i64(in);
    const std::int64_t cols = read_i64(in);
    if (rows < 0 || cols < 0) throw ValidationError("checkpoint: bad matrix shape");
    Matrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double)) * m.size());
    if (!in) throw ValidationError("checkpoint: truncated file");
    return m;
}

void write_vector(std::ostream& out, const Vector& v) {
    write_i64(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(sizeof(double)) * v.size());
}

Vector read_vector(std::istream& in) {
    const std::int64_t size = read_i64(in);
    if (size < 0) throw ValidationError("checkpoint: bad vector length");
    Vector v(size);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(double)) * v.size());
    if (!in) throw ValidationError("checkpoint: truncated file");
    return v;
}

void write_params(std::ostream& out, const ModelParams& params) {
    for (int layer = 0; layer < 2; ++layer) {
        write_i64(out, static_cast<std::int64_t>(params.layers[layer].size()));
        for (const auto& [etype, w] : params.layers[layer]) {
            write_i64(out, etype);
            write_string(out, edge_type_name(etype));
            write_matrix(out, w);
        }
    }
    write_matrix(out, params.head_weight);
    write_vector(out, params.head_bias);
}

ModelParams read_params(std::istream& in) {
    ModelParams params;
    for (int layer = 0; layer < 2; ++layer) {
        const std::int64_t count = read_i64(in);
        for (std::int64_t i = 0; i < count; ++i) {
            const int etype = static_cast<int>(read_i64(in));
            const std::string name = read_string(in);
            if (name != edge_type_name(etype)) {
                throw ValidationError("checkpoint: edge-type name '" + name + "' does not match id " +
                                      std::to_string(etype));
            }
            params.layers[layer][etype] = read_matrix(in);
        }
    }
    params.head_weight = read_matrix(in);
    params.head_bias = read_vector(in);
    return params;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params, const AdamWState* state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open checkpoint for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    write_i64(out, params.d_in());
    write_i64(out, params.d_hidden());
    write_i64(out, params.d_out());
    write_i64(out, params.num_classes());
    write_params(out, params);
    out.put(state ? '\1' : '\0');
    if (state) {
        write_i64(out, state->t);
        write_params(out, state->m);
        write_params(out, state->v);
    }
    if (!out) throw ValidationError("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ValidationError("not a checkpoint file: " + path);
    }
    read_i64(in);  // dims are redundant with the matrices; kept for inspection
    read_i64(in);
    read_i64(in);
    read_i64(in);
    Checkpoint ckpt;
    ckpt.params = read_params(in);
    const int has_state = in.get();
    if (has_state == 1) {
        AdamWState state;
        state.t = read_i64(in);
        state.m = read_params(in);
        state.v = read_params(in);
        ckpt.state = std::move(state);
    } else if (has_state != 0) {
        throw ValidationError("checkpoint: truncated file");
    }
    return ckpt;
}

}  // namespace hetgcn
