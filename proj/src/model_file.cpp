#include "bprank/model_file.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

namespace bprank {

namespace {

constexpr std::array<char, 8> kMagic{'B', 'P', 'R', 'M', 'O', 'D', 'E', 'L'};

template <typename U>
void put_le(std::ostream& out, U v) {
    std::array<char, sizeof(U)> buf{};
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf.data(), buf.size());
}

template <typename U>
U get_le(std::istream& in) {
    std::array<unsigned char, sizeof(U)> buf{};
    if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) throw Error("model file is truncated");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& out, double v) {
    put_le(out, std::bit_cast<std::uint64_t>(v));
}

double get_f64(std::istream& in) {
    return std::bit_cast<double>(get_le<std::uint64_t>(in));
}

}  // namespace

void write_model(std::ostream& out, const ModelFile& model) {
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, ModelFile::kVersion);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(model.weights.w.size()));
    put_f64(out, model.w_star);
    for (Eigen::Index i = 0; i < model.weights.w.size(); ++i) put_f64(out, model.weights.w(i));
}

ModelFile read_model(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw Error("not a bprank model file (bad magic)");
    const auto version = get_le<std::uint32_t>(in);
    if (version != ModelFile::kVersion) throw Error("unsupported model file version " + std::to_string(version));
    const auto dim = get_le<std::uint64_t>(in);
    if (dim > (std::uint64_t{1} << 32)) throw Error("model file dimension is implausible");
    ModelFile m;
    m.w_star = get_f64(in);
    m.weights.w.resize(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < m.weights.w.size(); ++i) m.weights.w(i) = get_f64(in);
    if (in.peek() != std::char_traits<char>::eof()) throw Error("model file has trailing bytes");
    return m;
}

void save_model(const std::string& path, const ModelFile& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_model(out, model);
    out.flush();
    if (!out) throw Error("failed writing " + path);
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return read_model(in);
}

}  // namespace bprank
