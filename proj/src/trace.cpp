#include "sehs/trace.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sehs/errors.hpp"
#include "sehs/io.hpp"

namespace sehs {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

VoltageTrace::VoltageTrace(double sample_rate_hz, AdcConfig adc)
    : sample_rate_hz_(sample_rate_hz), adc_(adc) {
  if (!(sample_rate_hz > 0.0)) {
    throw config_error("trace sample rate must be positive");
  }
  adc_.validate();
}

void VoltageTrace::add_quantized(const std::string& name, std::vector<std::uint16_t> codes) {
  if (channels_.count(name)) throw data_error("duplicate channel '" + name + "'");
  for (std::uint16_t c : codes) {
    if (c > adc_.max_code()) {
      throw data_error("channel '" + name + "' has code " + std::to_string(c) +
                       " above ADC max " + std::to_string(adc_.max_code()));
    }
  }
  if (!channels_.empty() && codes.size() != n_samples()) {
    throw data_error("channel '" + name + "' length " + std::to_string(codes.size()) +
                     " does not match trace length " + std::to_string(n_samples()));
  }
  order_.push_back(name);
  channels_[name] = Channel{true, std::move(codes), {}};
}

void VoltageTrace::add_quantized_from_volts(const std::string& name,
                                            const std::vector<double>& volts) {
  std::vector<std::uint16_t> codes(volts.size());
  for (std::size_t i = 0; i < volts.size(); ++i) {
    codes[i] = static_cast<std::uint16_t>(adc_quantize(volts[i], adc_));
  }
  add_quantized(name, std::move(codes));
}

void VoltageTrace::add_real(const std::string& name, std::vector<double> values) {
  if (channels_.count(name)) throw data_error("duplicate channel '" + name + "'");
  if (!channels_.empty() && values.size() != n_samples()) {
    throw data_error("channel '" + name + "' length " + std::to_string(values.size()) +
                     " does not match trace length " + std::to_string(n_samples()));
  }
  order_.push_back(name);
  channels_[name] = Channel{false, {}, std::move(values)};
}

bool VoltageTrace::has(const std::string& name) const { return channels_.count(name) != 0; }

const VoltageTrace::Channel& VoltageTrace::channel(const std::string& name) const {
  auto it = channels_.find(name);
  if (it == channels_.end()) throw data_error("trace has no channel '" + name + "'");
  return it->second;
}

bool VoltageTrace::is_quantized(const std::string& name) const { return channel(name).quantized; }

const std::vector<std::uint16_t>& VoltageTrace::raw(const std::string& name) const {
  const Channel& ch = channel(name);
  if (!ch.quantized) throw data_error("channel '" + name + "' is not quantized");
  return ch.codes;
}

std::vector<double> VoltageTrace::volts(const std::string& name) const {
  const Channel& ch = channel(name);
  if (!ch.quantized) return ch.values;
  std::vector<double> out(ch.codes.size());
  for (std::size_t i = 0; i < ch.codes.size(); ++i) {
    out[i] = adc_to_voltage(ch.codes[i], adc_);
  }
  return out;
}

std::size_t VoltageTrace::n_samples() const {
  if (order_.empty()) return 0;
  return channels_.at(order_.front()).size();
}

double VoltageTrace::duration_s() const {
  return sample_rate_hz_ > 0 ? static_cast<double>(n_samples()) / sample_rate_hz_ : 0.0;
}

void save_trace(const VoltageTrace& trace, const std::string& path) {
  std::ostringstream out;
  out << "# sample_rate_hz=" << format_double(trace.sample_rate_hz()) << "\n";
  out << "# adc_bits=" << trace.adc().bits << "\n";
  out << "# adc_full_scale_v=" << format_double(trace.adc().full_scale_v) << "\n";
  for (const auto& [k, v] : trace.meta) {
    out << "# " << k << "=" << v << "\n";
  }
  out << "t_s";
  for (const auto& name : trace.names()) {
    out << "," << name << (trace.is_quantized(name) ? "_raw" : "");
  }
  out << "\n";

  const std::size_t n = trace.n_samples();
  std::vector<const std::vector<std::uint16_t>*> raw_cols;
  std::vector<std::vector<double>> real_cols;
  std::vector<bool> quant;
  for (const auto& name : trace.names()) {
    quant.push_back(trace.is_quantized(name));
    if (quant.back()) {
      raw_cols.push_back(&trace.raw(name));
      real_cols.emplace_back();
    } else {
      raw_cols.push_back(nullptr);
      real_cols.push_back(trace.volts(name));
    }
  }
  char tbuf[32];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(tbuf, sizeof(tbuf), "%.6f", static_cast<double>(i) / trace.sample_rate_hz());
    out << tbuf;
    for (std::size_t c = 0; c < quant.size(); ++c) {
      out << ",";
      if (quant[c]) {
        out << (*raw_cols[c])[i];
      } else {
        out << format_double(real_cols[c][i]);
      }
    }
    out << "\n";
  }
  write_file_atomic(path, out.str());
}

namespace {

double parse_double_field(const std::string& field, std::size_t line_no, std::size_t col_no) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw data_error("parse error at line " + std::to_string(line_no) + ", column " +
                     std::to_string(col_no) + ": '" + field + "' is not a number");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

VoltageTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open trace file '" + path + "'");

  std::map<std::string, std::string> meta;
  std::string line;
  std::size_t line_no = 0;
  std::string header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::size_t b = body.find_first_not_of(' ');
      if (b == std::string::npos) continue;
      body = body.substr(b);
      std::size_t eq = body.find('=');
      if (eq == std::string::npos) {
        throw data_error("parse error at line " + std::to_string(line_no) +
                         ": metadata line without '='");
      }
      meta[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    header = line;
    break;
  }
  if (header.empty()) throw data_error("empty trace file '" + path + "'");

  for (const char* key : {"sample_rate_hz", "adc_bits", "adc_full_scale_v"}) {
    if (!meta.count(key)) {
      throw data_error("trace file '" + path + "' is missing preamble key '" + key + "'");
    }
  }
  AdcConfig adc;
  adc.bits = static_cast<int>(parse_double_field(meta.at("adc_bits"), 0, 0));
  adc.full_scale_v = parse_double_field(meta.at("adc_full_scale_v"), 0, 0);
  const double rate = parse_double_field(meta.at("sample_rate_hz"), 0, 0);
  VoltageTrace trace(rate, adc);
  meta.erase("sample_rate_hz");
  meta.erase("adc_bits");
  meta.erase("adc_full_scale_v");
  trace.meta = meta;

  std::vector<std::string> cols = split_csv(header);
  if (cols.empty() || cols[0] != "t_s") {
    throw data_error("parse error at line " + std::to_string(line_no) +
                     ": header must start with 't_s'");
  }
  struct ColSpec {
    std::string name;
    bool quantized;
  };
  std::vector<ColSpec> specs;
  for (std::size_t c = 1; c < cols.size(); ++c) {
    const std::string& col = cols[c];
    if (col.size() > 4 && col.substr(col.size() - 4) == "_raw") {
      specs.push_back({col.substr(0, col.size() - 4), true});
    } else {
      specs.push_back({col, false});
    }
  }
  if (specs.empty()) {
    throw data_error("parse error at line " + std::to_string(line_no) + ": no data columns");
  }

  std::vector<std::vector<std::uint16_t>> raw_cols(specs.size());
  std::vector<std::vector<double>> real_cols(specs.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.size() != specs.size() + 1) {
      throw data_error("structural error at line " + std::to_string(line_no) + ": row has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(specs.size() + 1));
    }
    for (std::size_t c = 0; c < specs.size(); ++c) {
      const std::string& f = fields[c + 1];
      if (specs[c].quantized) {
        int code = 0;
        auto res = std::from_chars(f.data(), f.data() + f.size(), code);
        if (res.ec != std::errc() || res.ptr != f.data() + f.size() || code < 0) {
          throw data_error("parse error at line " + std::to_string(line_no) + ", column " +
                           std::to_string(c + 2) + ": '" + f + "' is not a raw ADC code");
        }
        if (code > adc.max_code()) {
          throw data_error("parse error at line " + std::to_string(line_no) + ", column " +
                           std::to_string(c + 2) + ": code " + f + " exceeds ADC range");
        }
        raw_cols[c].push_back(static_cast<std::uint16_t>(code));
      } else {
        real_cols[c].push_back(parse_double_field(f, line_no, c + 2));
      }
    }
  }
  if (raw_cols.empty() || (specs[0].quantized ? raw_cols[0].empty() : real_cols[0].empty())) {
    throw data_error("trace file '" + path + "' has a header but no samples");
  }
  for (std::size_t c = 0; c < specs.size(); ++c) {
    if (specs[c].quantized) {
      trace.add_quantized(specs[c].name, std::move(raw_cols[c]));
    } else {
      trace.add_real(specs[c].name, std::move(real_cols[c]));
    }
  }
  return trace;
}

}  // namespace sehs
