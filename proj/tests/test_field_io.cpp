#include "doctest.h"
#include "test_util.hpp"

#include <sstream>

#include "gpscat/field_io.hpp"

using namespace gps;

TEST_CASE("binary round trip is lossless at double precision") {
    Grid g = make_grid(2, 16, 7.5);
    Field f = gps::testing::random_complex(g, 1).to_spectral();
    std::stringstream ss;
    write_field_binary(ss, f);
    CHECK(ss.str().size() == 40 + 16 * g.size());
    Field r = read_field_binary(ss);
    CHECK(r.grid() == g);
    CHECK(r.repr() == Repr::spectral);
    CHECK(r.kind() == ValueKind::complex);
    CHECK(r.data() == f.data());
}

TEST_CASE("binary single precision keeps float accuracy") {
    Grid g = make_grid(1, 32, 3.0);
    Field f = gps::testing::random_bandlimited(g, 8, 2);
    std::stringstream ss;
    write_field_binary(ss, f, Precision::complex64);
    Field r = read_field_binary(ss);
    CHECK(r.is_real());
    CHECK(max_abs_diff(r, f) < 1e-6 * max_abs(f));
}

TEST_CASE("corrupt headers are rejected") {
    std::stringstream ss("NOTAFILE........");
    CHECK_THROWS(read_field_binary(ss));
    Grid g = make_grid(1, 8, 1.0);
    std::stringstream t;
    write_field_binary(t, Field(g, Repr::physical, ValueKind::real));
    std::string s = t.str().substr(0, 50);
    std::stringstream tr(s);
    CHECK_THROWS(read_field_binary(tr));
}

TEST_CASE("json round trip is exact") {
    Grid g = make_grid(3, 8, 2.25);
    Field f = gps::testing::random_complex(g, 5);
    Field r = field_from_json(nlohmann::json::parse(field_to_json(f).dump()));
    CHECK(r.grid() == g);
    CHECK(r.data() == f.data());
}
