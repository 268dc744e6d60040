#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "sehs/errors.hpp"
#include "sehs/io.hpp"
#include "sehs/trace.hpp"

using namespace sehs;

namespace {
std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_SUITE("trace") {

TEST_CASE("quantized channels round-trip bit-exactly through CSV") {
  VoltageTrace tr(100.0, AdcConfig{});
  tr.add_quantized("V_A", {0, 512, 1023, 7});
  tr.add_quantized("V_B", {1, 2, 3, 4});
  tr.meta["subject_id"] = "3";
  tr.meta["source_peh"] = "Front";
  const std::string path = temp_path("trace_rt.csv");
  save_trace(tr, path);
  const VoltageTrace back = load_trace(path);
  CHECK(back.sample_rate_hz() == 100.0);
  CHECK(back.n_samples() == 4);
  CHECK(back.is_quantized("V_A"));
  CHECK(back.raw("V_A") == std::vector<std::uint16_t>{0, 512, 1023, 7});
  CHECK(back.raw("V_B") == std::vector<std::uint16_t>{1, 2, 3, 4});
  CHECK(back.meta.at("subject_id") == "3");
  CHECK(back.meta.at("source_peh") == "Front");
  std::remove(path.c_str());
}

TEST_CASE("real channels round-trip exactly via shortest decimals") {
  VoltageTrace tr(50.0, AdcConfig{});
  const std::vector<double> vals = {0.1, -2.75, 3.062500000000001, 1e-17};
  tr.add_real("V_f", vals);
  const std::string path = temp_path("trace_real.csv");
  save_trace(tr, path);
  const VoltageTrace back = load_trace(path);
  CHECK_FALSE(back.is_quantized("V_f"));
  const std::vector<double> got = back.volts("V_f");
  REQUIRE(got.size() == vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) CHECK(got[i] == vals[i]);
  std::remove(path.c_str());
}

TEST_CASE("volt view of a quantized channel derives from the codes") {
  VoltageTrace tr(100.0, AdcConfig{});
  tr.add_quantized("V_A", {512});
  CHECK(tr.volts("V_A")[0] == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("mismatched channel lengths are rejected") {
  VoltageTrace tr(100.0, AdcConfig{});
  tr.add_quantized("V_A", {1, 2, 3});
  CHECK_THROWS_AS(tr.add_quantized("V_B", {1, 2}), data_error);
}

TEST_CASE("duplicate channel names are rejected") {
  VoltageTrace tr(100.0, AdcConfig{});
  tr.add_quantized("V_A", {1});
  CHECK_THROWS_AS(tr.add_quantized("V_A", {2}), data_error);
}

TEST_CASE("unknown channel lookups are rejected") {
  VoltageTrace tr(100.0, AdcConfig{});
  tr.add_quantized("V_A", {1});
  CHECK_THROWS_AS(tr.volts("nope"), data_error);
}

TEST_CASE("missing file raises a data error") {
  CHECK_THROWS_AS(load_trace("/nonexistent/definitely_not_here.csv"), data_error);
}

TEST_CASE("malformed CSV raises a data error") {
  const std::string path = temp_path("trace_bad.csv");
  write_file_atomic(path, "# sample_rate_hz=100\nt_s,V_A_raw\n0.0,not_a_number\n");
  CHECK_THROWS_AS(load_trace(path), data_error);
  write_file_atomic(path, "no preamble at all\n");
  CHECK_THROWS_AS(load_trace(path), data_error);
  std::remove(path.c_str());
}

TEST_CASE("duration covers n samples at the stated rate") {
  VoltageTrace tr(100.0, AdcConfig{});
  tr.add_quantized("V_A", std::vector<std::uint16_t>(250, 0));
  CHECK(tr.duration_s() == doctest::Approx(2.5));
}

TEST_CASE("format_double writes shortest exact decimals") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-0.25) == "-0.25");
}

TEST_CASE("atomic writes leave no temp files behind") {
  const std::string path = temp_path("atomic_x.txt");
  write_file_atomic(path, "hello");
  CHECK(read_file(path) == "hello");
  int count = 0;
  for (const auto& e : std::filesystem::directory_iterator(
           std::filesystem::temp_directory_path())) {
    const std::string name = e.path().filename().string();
    if (name.rfind("atomic_x.txt", 0) == 0) ++count;
  }
  CHECK(count == 1);
  std::remove(path.c_str());
}

}  // TEST_SUITE
