#pragma once
// Field serialization.
//
// Binary layout (little endian):
//   offset  0  char[8]  magic "GPSCATF1"
//   offset  8  uint32   format version (1)
//   offset 12  uint32   d
//   offset 16  uint32   n
//   offset 20  uint32   repr        0 = physical, 1 = spectral
//   offset 24  uint32   value_kind  0 = real, 1 = complex
//   offset 28  uint32   bytes per value: 8 (complex64) or 16 (complex128)
//   offset 32  float64  L
//   offset 40  payload  n^d interleaved (re, im) pairs, row-major with axis 0 slowest
//
// JSON: {"d","n","L","repr","value_kind","re":[...],"im":[...]} with
// round-trip double formatting.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "gpscat/field.hpp"

namespace gps {

enum class Precision { complex64, complex128 };

void write_field_binary(std::ostream& os, const Field& f, Precision p = Precision::complex128);
Field read_field_binary(std::istream& is);
void save_field(const std::string& path, const Field& f, Precision p = Precision::complex128);
Field load_field(const std::string& path);

nlohmann::json field_to_json(const Field& f);
Field field_from_json(const nlohmann::json& j);

}  // namespace gps
