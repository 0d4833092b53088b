#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "rmom/errors.hpp"
#include "rmom/instance_io.hpp"
#include "rmom/trace_io.hpp"

using namespace rmom;

TEST_CASE("matrix payloads round-trip bit for bit") {
  Rng rng(3);
  const Matrix a = gaussian_matrix(4, 7, rng);
  const Matrix b = decode_matrix(encode_matrix(a), 4, 7);
  CHECK((a.array() == b.array()).all());
  CHECK_THROWS_AS(decode_matrix("not base64!!", 2, 2), ConfigError);
  CHECK_THROWS_AS(decode_matrix(encode_matrix(a), 4, 6), ConfigError);
}

TEST_CASE("instances round-trip") {
  const KarcherInstance k = gen_spd_set(3, 4, 100.0, 9);
  const InstanceRecord rec = record_of(k);
  const std::string text = instance_to_json(rec);
  const KarcherInstance back = karcher_from(instance_from_json(text));
  REQUIRE(back.m() == 3);
  for (int i = 0; i < 3; ++i) CHECK((back.mats[i].array() == k.mats[i].array()).all());
  CHECK(back.cond == 100.0);
  CHECK(back.seed == 9);
  CHECK(instance_to_json(record_of(back)) == text);

  const RayleighInstance r = gen_rayleigh(5, 6, 2);
  const RayleighInstance rb = rayleigh_from(instance_from_json(instance_to_json(record_of(r))));
  CHECK((rb.a.array() == r.a.array()).all());
  CHECK(rb.lipschitz == r.lipschitz);

  const ScalingInstance s = gen_scaling(2, 3, 4);
  const ScalingInstance sb = scaling_from(instance_from_json(instance_to_json(record_of(s))));
  CHECK((sb.ops[1].array() == s.ops[1].array()).all());

  CHECK_THROWS_AS(karcher_from(record_of(r)), ConfigError);
  CHECK_THROWS_AS(instance_from_json("{\"kind\": \"rayleigh\"}"), ConfigError);
  CHECK_THROWS_AS(instance_from_json("[1, 2"), ConfigError);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("format_double round-trips") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = standard_normal(rng) * std::pow(10.0, uniform(rng, -300, 300));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("trace CSV round-trips") {
  std::vector<IterRecord> rows(3);
  Rng rng(2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    IterRecord& r = rows[i];
    r.k = static_cast<long>(i);
    r.f_x = standard_normal(rng);
    r.f_y = standard_normal(rng);
    r.grad_norm_y = std::abs(standard_normal(rng));
    r.beta = uniform(rng, 0, 1);
    r.a_next = 1.0 / 3.0;
    r.big_a = 2.0 / 3.0;
    r.cond2_margin = -1e-300;
    r.dist_x0 = 7.25;
    r.wall_ns = 123456789012LL;
  }
  const std::string csv = trace_to_csv(rows);
  CHECK(csv.rfind(kTraceHeader, 0) == 0);
  const auto back = trace_from_csv(csv);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].f_x == rows[i].f_x);
    CHECK(back[i].beta == rows[i].beta);
    CHECK(back[i].cond2_margin == rows[i].cond2_margin);
    CHECK(back[i].wall_ns == rows[i].wall_ns);
  }
  CHECK(trace_to_csv(back) == csv);
  CHECK_THROWS_AS(trace_from_csv("k,f\n1,2\n"), ConfigError);
}

TEST_CASE("atomic_write replaces the file") {
  const auto dir = std::filesystem::temp_directory_path() / "rmom_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "a.txt").string();
  atomic_write(path, "one");
  atomic_write(path, "two");
  CHECK(read_file(path) == "two");
  std::filesystem::remove_all(dir);
}
