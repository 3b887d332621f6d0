#include "gpscat/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace gps {

namespace {

static_assert(std::endian::native == std::endian::little, "binary field format assumes a little-endian host");

constexpr char kMagic[8] = {'G', 'P', 'S', 'C', 'A', 'T', 'F', '1'};

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("field file truncated");
    return v;
}

}  // namespace

void write_field_binary(std::ostream& os, const Field& f, Precision p) {
    const Grid& g = f.grid();
    os.write(kMagic, 8);
    put<std::uint32_t>(os, 1);
    put<std::uint32_t>(os, g.d);
    put<std::uint32_t>(os, g.n);
    put<std::uint32_t>(os, f.repr() == Repr::physical ? 0 : 1);
    put<std::uint32_t>(os, f.is_real() ? 0 : 1);
    put<std::uint32_t>(os, p == Precision::complex64 ? 8 : 16);
    put<double>(os, g.L);
    for (auto& v : f.data()) {
        if (p == Precision::complex64) {
            put<float>(os, static_cast<float>(v.real()));
            put<float>(os, static_cast<float>(v.imag()));
        } else {
            put<double>(os, v.real());
            put<double>(os, v.imag());
        }
    }
    if (!os) throw std::runtime_error("failed writing field");
}

Field read_field_binary(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("not a field file (bad magic)");
    auto version = get<std::uint32_t>(is);
    if (version != 1) throw std::runtime_error("unsupported field file version");
    int d = static_cast<int>(get<std::uint32_t>(is));
    int n = static_cast<int>(get<std::uint32_t>(is));
    auto repr = get<std::uint32_t>(is);
    auto kind = get<std::uint32_t>(is);
    auto width = get<std::uint32_t>(is);
    double L = get<double>(is);
    if (repr > 1 || kind > 1 || (width != 8 && width != 16)) throw std::runtime_error("corrupt field header");
    Grid g = make_grid(d, n, L);
    std::vector<cplx> data(g.size());
    for (auto& v : data) {
        if (width == 8) {
            float re = get<float>(is), im = get<float>(is);
            v = cplx(re, im);
        } else {
            double re = get<double>(is), im = get<double>(is);
            v = cplx(re, im);
        }
    }
    return Field(g, repr ? Repr::spectral : Repr::physical, kind ? ValueKind::complex : ValueKind::real,
                 std::move(data));
}

void save_field(const std::string& path, const Field& f, Precision p) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_field_binary(os, f, p);
}

Field load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_field_binary(is);
}

nlohmann::json field_to_json(const Field& f) {
    nlohmann::json j;
    j["d"] = f.grid().d;
    j["n"] = f.grid().n;
    j["L"] = f.grid().L;
    j["repr"] = to_string(f.repr());
    j["value_kind"] = to_string(f.kind());
    std::vector<double> re(f.size()), im(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        re[i] = f[i].real();
        im[i] = f[i].imag();
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

Field field_from_json(const nlohmann::json& j) {
    Grid g = make_grid(j.at("d").get<int>(), j.at("n").get<int>(), j.at("L").get<double>());
    auto repr = j.at("repr").get<std::string>();
    auto kind = j.at("value_kind").get<std::string>();
    if (repr != "physical" && repr != "spectral") throw std::runtime_error("bad repr in field json");
    if (kind != "real" && kind != "complex") throw std::runtime_error("bad value_kind in field json");
    auto re = j.at("re").get<std::vector<double>>();
    auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != g.size() || im.size() != g.size()) throw std::runtime_error("field json size mismatch");
    std::vector<cplx> data(g.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = cplx(re[i], im[i]);
    return Field(g, repr == "spectral" ? Repr::spectral : Repr::physical,
                 kind == "real" ? ValueKind::real : ValueKind::complex, std::move(data));
}

}  // namespace gps
