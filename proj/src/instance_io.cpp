#include "rmom/instance_io.hpp"

#include <sodium.h>

#include <bit>
#include <cstring>

#include <nlohmann/json.hpp>

#include "rmom/errors.hpp"

namespace rmom {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
  return out;
}

void require_kind(const InstanceRecord& rec, const char* kind) {
  if (rec.kind != kind) {
    throw ConfigError("instance kind is '" + rec.kind + "', expected '" + kind + "'");
  }
}

}  // namespace

std::string encode_matrix(const Matrix& a) {
  ensure_sodium();
  std::vector<unsigned char> bytes(static_cast<std::size_t>(a.size()) * 8);
  std::size_t off = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const std::uint64_t le = to_le(std::bit_cast<std::uint64_t>(a(i, j)));
      std::memcpy(bytes.data() + off, &le, 8);
      off += 8;
    }
  }
  const int variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_encoded_len(bytes.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), variant);
  out.resize(std::strlen(out.c_str()));
  return out;
}

Matrix decode_matrix(const std::string& b64, int rows, int cols) {
  ensure_sodium();
  const std::size_t want = static_cast<std::size_t>(rows) * cols * 8;
  std::vector<unsigned char> bytes(want + 8);
  std::size_t got = 0;
  if (sodium_base642bin(bytes.data(), bytes.size(), b64.data(), b64.size(), nullptr, &got, nullptr,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      got != want) {
    throw ConfigError("matrix payload is not valid base64 of " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " doubles");
  }
  Matrix a(rows, cols);
  std::size_t off = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      std::uint64_t le = 0;
      std::memcpy(&le, bytes.data() + off, 8);
      a(i, j) = std::bit_cast<double>(to_le(le));
      off += 8;
    }
  }
  return a;
}

std::string instance_to_json(const InstanceRecord& rec) {
  nlohmann::ordered_json j;
  j["kind"] = rec.kind;
  j["d"] = rec.d;
  if (rec.kind == "rayleigh") {
    j["n"] = rec.n;
  } else {
    j["m"] = rec.m;
  }
  j["cond"] = rec.cond;
  j["seed"] = rec.seed;
  j["matrices"] = nlohmann::ordered_json::array();
  for (const Matrix& a : rec.matrices) j["matrices"].push_back(encode_matrix(a));
  return j.dump(1);
}

InstanceRecord instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("instance file is not valid JSON: ") + e.what());
  }
  InstanceRecord rec;
  try {
    rec.kind = j.at("kind").get<std::string>();
    rec.d = j.at("d").get<int>();
    rec.n = j.value("n", 0);
    rec.m = j.value("m", 0);
    rec.cond = j.value("cond", 0.0);
    rec.seed = j.value("seed", std::uint64_t{0});
    for (const auto& s : j.at("matrices")) {
      rec.matrices.push_back(decode_matrix(s.get<std::string>(), rec.d, rec.d));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed instance file: ") + e.what());
  }
  if (rec.d < 1) throw ConfigError("instance d must be >= 1");
  const std::size_t expect = rec.kind == "rayleigh" ? 1 : static_cast<std::size_t>(rec.m);
  if (rec.matrices.size() != expect) {
    throw ConfigError("instance holds " + std::to_string(rec.matrices.size()) +
                      " matrices, expected " + std::to_string(expect));
  }
  return rec;
}

InstanceRecord record_of(const RayleighInstance& inst) {
  return {"rayleigh", static_cast<int>(inst.a.rows()), inst.n, 0, 0.0, inst.seed, {inst.a}};
}

InstanceRecord record_of(const KarcherInstance& inst) {
  return {"karcher", inst.d(), 0, inst.m(), inst.cond, inst.seed, inst.mats};
}

InstanceRecord record_of(const ScalingInstance& inst) {
  return {"scaling", inst.d(), 0, inst.m(), 0.0, inst.seed, inst.ops};
}

RayleighInstance rayleigh_from(const InstanceRecord& rec) {
  require_kind(rec, "rayleigh");
  RayleighInstance inst = make_rayleigh(rec.matrices.at(0));
  inst.n = rec.n;
  inst.seed = rec.seed;
  return inst;
}

KarcherInstance karcher_from(const InstanceRecord& rec) {
  require_kind(rec, "karcher");
  KarcherInstance inst;
  inst.mats = rec.matrices;
  inst.cond = rec.cond;
  inst.seed = rec.seed;
  return inst;
}

ScalingInstance scaling_from(const InstanceRecord& rec) {
  require_kind(rec, "scaling");
  ScalingInstance inst;
  inst.ops = rec.matrices;
  inst.seed = rec.seed;
  return inst;
}

std::string sha256_hex(const std::string& bytes) {
  ensure_sodium();
  unsigned char digest[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(digest, reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  char hex[crypto_hash_sha256_BYTES * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, digest, sizeof digest);
  return hex;
}

}  // namespace rmom
