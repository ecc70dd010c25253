#include "cvcs/block_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cvcs {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_block_stream(std::ostream& os, const BlockStream& stream) {
  const auto& h = stream.header;
  os << "N=" << h.block_len << " ratio=" << format_value(h.ratio) << " mode=" << h.mode
     << " seed=" << h.seed << "\n";
  for (const auto& b : stream.blocks) {
    os << b.block_seq << "," << b.pattern.block_len;
    for (int i = 0; i < b.pattern.kept(); ++i) {
      os << "," << b.pattern.indices[i] << ":" << format_value(b.values[i]);
    }
    os << "\n";
  }
}

void write_block_stream_file(const std::string& path, const BlockStream& stream) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_block_stream(os, stream);
}

namespace {

[[noreturn]] void parse_fail(const std::string& what, int line_no) {
  throw std::runtime_error("block stream parse error at line " + std::to_string(line_no) + ": " +
                           what);
}

}  // namespace

BlockStream read_block_stream(std::istream& is) {
  BlockStream stream;
  std::string line;
  int line_no = 0;

  if (!std::getline(is, line)) parse_fail("missing header", 1);
  ++line_no;
  {
    char mode_buf[32] = {0};
    unsigned long long seed = 0;
    if (std::sscanf(line.c_str(), "N=%d ratio=%lf mode=%31s seed=%llu", &stream.header.block_len,
                    &stream.header.ratio, mode_buf, &seed) != 4) {
      parse_fail("bad header: " + line, line_no);
    }
    stream.header.mode = mode_buf;
    stream.header.seed = seed;
    if (stream.header.mode != "exact" && stream.header.mode != "bernoulli")
      parse_fail("unknown mode: " + stream.header.mode, line_no);
  }

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    SampledBlock b;
    char sep = 0;
    if (!(ls >> b.block_seq >> sep >> b.pattern.block_len) || sep != ',')
      parse_fail("bad block prefix", line_no);

    std::vector<double> vals;
    while (ls >> sep) {
      if (sep != ',') parse_fail("expected ','", line_no);
      int idx = 0;
      double val = 0.0;
      char colon = 0;
      if (!(ls >> idx >> colon >> val) || colon != ':') parse_fail("bad idx:val pair", line_no);
      if (idx < 0 || idx >= b.pattern.block_len) parse_fail("index out of range", line_no);
      if (!b.pattern.indices.empty() && idx <= b.pattern.indices.back())
        parse_fail("indices not strictly increasing", line_no);
      b.pattern.indices.push_back(idx);
      vals.push_back(val);
    }
    b.values = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
    stream.blocks.push_back(std::move(b));
  }
  return stream;
}

BlockStream read_block_stream_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_block_stream(is);
}

}  // namespace cvcs
