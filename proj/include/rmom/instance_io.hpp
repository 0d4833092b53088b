#pragma once

// Instance files: JSON with base64-encoded little-endian f64 payloads,
//   {"kind", "d", "n" | "m", "cond", "seed", "matrices": [...]}
// Matrices are stored row-major. Generated instances always carry their seed.

#include <cstdint>
#include <string>
#include <vector>

#include "rmom/problems.hpp"

namespace rmom {

struct InstanceRecord {
  std::string kind;  // rayleigh | karcher | scaling
  int d = 0;
  int n = 0;         // rayleigh only
  int m = 0;         // karcher / scaling
  double cond = 0.0; // karcher only
  std::uint64_t seed = 0;
  std::vector<Matrix> matrices;
};

std::string encode_matrix(const Matrix& a);
Matrix decode_matrix(const std::string& b64, int rows, int cols);

std::string instance_to_json(const InstanceRecord& rec);
InstanceRecord instance_from_json(const std::string& text);

InstanceRecord record_of(const RayleighInstance& inst);
InstanceRecord record_of(const KarcherInstance& inst);
InstanceRecord record_of(const ScalingInstance& inst);

RayleighInstance rayleigh_from(const InstanceRecord& rec);
KarcherInstance karcher_from(const InstanceRecord& rec);
ScalingInstance scaling_from(const InstanceRecord& rec);

/// Lower-case hex SHA-256.
std::string sha256_hex(const std::string& bytes);

}  // namespace rmom
