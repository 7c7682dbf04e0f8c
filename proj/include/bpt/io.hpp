#ifndef BPT_IO_HPP
#define BPT_IO_HPP

#include <Eigen/Core>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "bpt/correlations.hpp"
#include "bpt/errors.hpp"
#include "bpt/jsa.hpp"
#include "bpt/schmidt.hpp"

// CSV formats. All numbers are written with 17 significant digits so that a
// save/load round trip is value-exact. Complex entries use the form
// "<re>+<im>j" / "<re>-<im>j".
//
//   jsa:       # jsa v1 na=<N> nb=<M> dwa=<dwa> dwb=<dwb> ca=<ca> cb=<cb>
//              N rows of M comma-separated complex entries
//   profile:   # cwprofile v1 n=<N> dw=<dw> c=<center>
//              one real value per line
//   schmidt:   # schmidt v1 k=<K>
//              one row per mode: r_k, then interleaved re/im of phi_k, then psi_k
//   corr:      # corr v1 kind=<kind> n=<N> d=<spacing> c=<center>
//              N rows; complex entries for Hermitian kinds, real for G2 kinds
//   samples:   # samples v1 seed=<seed> shots=<shots>
//              one row per shot, one column per mode

namespace bpt {
namespace io_detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_complex(const std::complex<double>& z) {
  char buf[88];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

inline double parse_double(const std::string& tok, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw ParseError("malformed number '" + tok + "'", line);
  return v;
}

inline std::complex<double> parse_complex(std::string tok, int line) {
  if (tok.empty() || tok.back() != 'j')
    throw ParseError("malformed complex entry '" + tok + "' (missing j suffix)", line);
  tok.pop_back();
  // Split at the sign separating the parts; signs directly after an exponent
  // marker belong to the exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = tok.size(); i-- > 1;) {
    if ((tok[i] == '+' || tok[i] == '-') && tok[i - 1] != 'e' && tok[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos)
    throw ParseError("malformed complex entry '" + tok + "j'", line);
  const double re = parse_double(tok.substr(0, split), line);
  const double im = parse_double(tok.substr(split), line);
  return {re, im};
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Parses "# <magic> v1 key=value ..." and returns the key/value map.
inline std::map<std::string, std::string> parse_header(const std::string& header,
                                                       const std::string& magic) {
  const std::vector<std::string> tokens = split(strip(header), ' ');
  if (tokens.size() < 3 || tokens[0] != "#" || tokens[1] != magic || tokens[2] != "v1")
    throw ParseError("expected '# " + magic + " v1' header", 1);
  std::map<std::string, std::string> fields;
  for (std::size_t i = 3; i < tokens.size(); ++i) {
    if (tokens[i].empty()) continue;
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos) throw ParseError("malformed header field '" + tokens[i] + "'", 1);
    fields[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  return fields;
}

inline std::string header_field(const std::map<std::string, std::string>& fields,
                                const std::string& key) {
  const auto it = fields.find(key);
  if (it == fields.end()) throw ParseError("missing header field '" + key + "'", 1);
  return it->second;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable across platforms
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace io_detail

inline void save_jsa(const TabulatedJsa& jsa, const std::string& path) {
  namespace d = io_detail;
  std::ofstream out = d::open_output(path);
  out << "# jsa v1 na=" << jsa.grid_a.count << " nb=" << jsa.grid_b.count
      << " dwa=" << d::format_double(jsa.grid_a.spacing)
      << " dwb=" << d::format_double(jsa.grid_b.spacing)
      << " ca=" << d::format_double(jsa.grid_a.center)
      << " cb=" << d::format_double(jsa.grid_b.center) << "\n";
  for (Eigen::Index i = 0; i < jsa.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < jsa.values.cols(); ++j) {
      if (j) out << ',';
      out << d::format_complex(jsa.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

inline TabulatedJsa load_jsa(const std::string& path) {
  namespace d = io_detail;
  std::ifstream in = d::open_input(path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty file '" + path + "'", 1);
  const auto fields = d::parse_header(header, "jsa");
  const int na = static_cast<int>(d::parse_double(d::header_field(fields, "na"), 1));
  const int nb = static_cast<int>(d::parse_double(d::header_field(fields, "nb"), 1));
  if (na < 2 || nb < 2) throw ParseError("jsa grids need at least 2 samples", 1);
  TabulatedJsa jsa;
  jsa.grid_a = FrequencyGrid{d::parse_double(d::header_field(fields, "ca"), 1),
                             d::parse_double(d::header_field(fields, "dwa"), 1), na};
  jsa.grid_b = FrequencyGrid{d::parse_double(d::header_field(fields, "cb"), 1),
                             d::parse_double(d::header_field(fields, "dwb"), 1), nb};
  validate_grid(jsa.grid_a, "load_jsa");
  validate_grid(jsa.grid_b, "load_jsa");
  jsa.values.resize(na, nb);
  std::string line;
  for (int i = 0; i < na; ++i) {
    const int line_no = i + 2;
    if (!std::getline(in, line)) throw ParseError("unexpected end of file: expected row", line_no);
    const std::vector<std::string> cells = d::split(d::strip(line), ',');
    if (static_cast<int>(cells.size()) != nb)
      throw ParseError("row has " + std::to_string(cells.size()) + " entries, expected " +
                           std::to_string(nb),
                       line_no);
    for (int j = 0; j < nb; ++j) jsa.values(i, j) = d::parse_complex(d::strip(cells[j]), line_no);
  }
  if (!jsa.values.allFinite()) throw ParseError("non-finite jsa entries", 1);
  return jsa;
}

inline void save_profile(const Eigen::ArrayXd& profile, const FrequencyGrid& grid,
                         const std::string& path) {
  namespace d = io_detail;
  if (profile.size() != grid.count)
    throw std::invalid_argument("save_profile: profile length does not match grid");
  std::ofstream out = d::open_output(path);
  out << "# cwprofile v1 n=" << grid.count << " dw=" << d::format_double(grid.spacing)
      << " c=" << d::format_double(grid.center) << "\n";
  for (Eigen::Index i = 0; i < profile.size(); ++i) out << d::format_double(profile[i]) << '\n';
  if (!out) throw IoError("write failure on '" + path + "'");
}

inline std::pair<Eigen::ArrayXd, FrequencyGrid> load_profile(const std::string& path) {
  namespace d = io_detail;
  std::ifstream in = d::open_input(path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty file '" + path + "'", 1);
  const auto fields = d::parse_header(header, "cwprofile");
  const int n = static_cast<int>(d::parse_double(d::header_field(fields, "n"), 1));
  if (n < 2) throw ParseError("profile grid needs at least 2 samples", 1);
  const FrequencyGrid grid{d::parse_double(d::header_field(fields, "c"), 1),
                           d::parse_double(d::header_field(fields, "dw"), 1), n};
  validate_grid(grid, "load_profile");
  Eigen::ArrayXd profile(n);
  std::string line;
  for (int i = 0; i < n; ++i) {
    const int line_no = i + 2;
    if (!std::getline(in, line))
      throw ParseError("unexpected end of file: expected value", line_no);
    profile[i] = d::parse_double(d::strip(line), line_no);
  }
  return {profile, grid};
}

// Export-only: one row per mode, r_k followed by interleaved re/im samples of
// phi_k then psi_k.
inline void save_schmidt(const SchmidtDecomposition& d, const std::string& path) {
  namespace io = io_detail;
  std::ofstream out = io::open_output(path);
  out << "# schmidt v1 k=" << d.mode_count() << "\n";
  for (int k = 0; k < d.mode_count(); ++k) {
    out << io::format_double(d.coefficients[k]);
    for (Eigen::Index i = 0; i < d.modes_a.rows(); ++i)
      out << ',' << io::format_double(d.modes_a(i, k).real()) << ','
          << io::format_double(d.modes_a(i, k).imag());
    for (Eigen::Index i = 0; i < d.modes_b.rows(); ++i)
      out << ',' << io::format_double(d.modes_b(i, k).real()) << ','
          << io::format_double(d.modes_b(i, k).imag());
    out << '\n';
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

inline void save_correlation(const CorrelationMatrix& m, const std::string& path) {
  namespace d = io_detail;
  const bool real_kind =
      m.kind == CorrelationKind::temporal_g2 || m.kind == CorrelationKind::normalized_g2;
  std::ofstream out = d::open_output(path);
  out << "# corr v1 kind=" << correlation_kind_name(m.kind) << " n=" << m.size()
      << " d=" << d::format_double(m.axis_spacing()) << " c=" << d::format_double(m.axis_center())
      << "\n";
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (j) out << ',';
      if (!m.is_defined(i, j))
        out << "nan";
      else if (real_kind)
        out << d::format_double(m.values(i, j).real());
      else
        out << d::format_complex(m.values(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

inline void save_samples(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& samples,
                         std::uint64_t seed, const std::string& path) {
  namespace d = io_detail;
  std::ofstream out = d::open_output(path);
  out << "# samples v1 seed=" << seed << " shots=" << samples.rows() << "\n";
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    for (Eigen::Index m = 0; m < samples.cols(); ++m) {
      if (m) out << ',';
      out << samples(s, m);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace bpt

#endif  // BPT_IO_HPP
