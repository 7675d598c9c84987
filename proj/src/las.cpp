// LAS 2.0 reader and writer (unwrapped mode only).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "seisreg/error.hpp"
#include "seisreg/formats.hpp"

namespace seisreg {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct HeaderLine {
  std::string mnemonic;
  LasValue field;
};

// "MNEM.UNIT  VALUE : DESCRIPTION"
HeaderLine parse_header_line(std::string_view line, std::size_t line_no) {
  const auto dot = line.find('.');
  if (dot == std::string_view::npos) {
    throw Error(ErrorKind::MalformedLas,
                "line " + std::to_string(line_no) + ": header line has no '.' delimiter");
  }
  HeaderLine h;
  h.mnemonic = std::string(trim(line.substr(0, dot)));
  std::string_view rest = line.substr(dot + 1);
  const auto unit_end = rest.find_first_of(" \t");
  const auto colon = rest.rfind(':');
  std::string_view unit = rest.substr(0, std::min(unit_end, colon));
  h.field.unit = std::string(trim(unit));
  rest.remove_prefix(std::min(unit.size(), rest.size()));
  const auto colon2 = rest.rfind(':');
  if (colon2 == std::string_view::npos) {
    h.field.value = std::string(trim(rest));
  } else {
    h.field.value = std::string(trim(rest.substr(0, colon2)));
    h.field.description = std::string(trim(rest.substr(colon2 + 1)));
  }
  return h;
}

}  // namespace

std::optional<std::size_t> LasLog::curve_index(std::string_view mnemonic) const {
  const std::string key = upper(mnemonic);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (upper(curves[i].mnemonic) == key) return i;
  }
  return std::nullopt;
}

std::optional<double> LasLog::meta_number(std::string_view mnemonic) const {
  const std::string key = upper(mnemonic);
  for (const auto& [k, v] : well_meta) {
    if (upper(k) == key) return parse_number(v.value);
  }
  return std::nullopt;
}

LasLog parse_las(std::string_view text) {
  LasLog log;
  bool have_v = false, have_c = false, have_a = false;
  std::optional<double> version;
  char section = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '~') {
      section = line.size() > 1 ? static_cast<char>(std::toupper(line[1])) : '?';
      if (section == 'V') have_v = true;
      if (section == 'C') have_c = true;
      if (section == 'A') {
        have_a = true;
        if (!have_c) throw Error(ErrorKind::MissingSection, "~A section precedes ~C");
      }
      continue;
    }

    switch (section) {
      case 'V': {
        const auto h = parse_header_line(line, line_no);
        const std::string key = upper(h.mnemonic);
        if (key == "VERS") version = parse_number(h.field.value);
        if (key == "WRAP" && upper(h.field.value) == "YES") {
          throw Error(ErrorKind::VersionUnsupported, "wrapped LAS (WRAP YES) is not supported");
        }
        break;
      }
      case 'W': {
        auto h = parse_header_line(line, line_no);
        if (upper(h.mnemonic) == "NULL") {
          const auto v = parse_number(h.field.value);
          if (!v) throw Error(ErrorKind::MalformedLas, "NULL value is not numeric");
          log.null_value = *v;
        }
        log.well_meta[h.mnemonic] = std::move(h.field);
        break;
      }
      case 'C': {
        const auto h = parse_header_line(line, line_no);
        log.curves.push_back({h.mnemonic, h.field.unit, h.field.description});
        break;
      }
      case 'A': {
        std::vector<std::optional<double>> row;
        std::istringstream tokens{std::string(line)};
        std::string tok;
        while (tokens >> tok) {
          const auto v = parse_number(tok);
          if (!v) {
            throw Error(ErrorKind::MalformedLas,
                        "line " + std::to_string(line_no) + ": '" + tok + "' is not a number");
          }
          if (*v == log.null_value) {
            row.emplace_back(std::nullopt);
          } else {
            row.emplace_back(*v);
          }
        }
        if (row.size() != log.curves.size()) {
          throw Error(ErrorKind::RaggedRow, "line " + std::to_string(line_no) + ": " +
                                                std::to_string(row.size()) + " values under " +
                                                std::to_string(log.curves.size()) + " curves");
        }
        log.rows.push_back(std::move(row));
        break;
      }
      default:
        break;  // ~P, ~O and unknown sections carry nothing we consume
    }
  }

  if (!have_v) throw Error(ErrorKind::MissingSection, "no ~V section");
  if (!have_c) throw Error(ErrorKind::MissingSection, "no ~C section");
  if (!have_a) throw Error(ErrorKind::MissingSection, "no ~A section");
  if (!version || std::abs(*version - 2.0) > 1e-9) {
    throw Error(ErrorKind::VersionUnsupported, "only LAS 2.0 is supported");
  }
  if (log.curves.empty()) throw Error(ErrorKind::MalformedLas, "~C section lists no curves");

  for (std::size_t r = 0; r < log.rows.size(); ++r) {
    if (!log.rows[r][0]) {
      throw Error(ErrorKind::MalformedLas, "null value in index column at row " + std::to_string(r));
    }
  }
  if (log.rows.size() >= 2) {
    const bool increasing = *log.rows[1][0] > *log.rows[0][0];
    for (std::size_t r = 1; r < log.rows.size(); ++r) {
      const double a = *log.rows[r - 1][0], b = *log.rows[r][0];
      if (increasing ? !(b > a) : !(b < a)) {
        throw Error(ErrorKind::MalformedLas,
                    "index column is not strictly monotone at row " + std::to_string(r));
      }
    }
  }
  return log;
}

std::string write_las(const LasLog& log) {
  std::ostringstream out;
  out << "~VERSION INFORMATION\n";
  out << " VERS.                 2.0 : CWLS LOG ASCII STANDARD - VERSION 2.0\n";
  out << " WRAP.                  NO : ONE LINE PER DEPTH STEP\n";
  out << "~WELL INFORMATION\n";
  bool wrote_null = false;
  for (const auto& [mnem, v] : log.well_meta) {
    std::string value = v.value;
    if (upper(mnem) == "NULL") {
      value = format_number(log.null_value);
      wrote_null = true;
    }
    out << ' ' << mnem << '.' << v.unit << ' ' << value << " : " << v.description << '\n';
  }
  if (!wrote_null) out << " NULL. " << format_number(log.null_value) << " : NULL VALUE\n";
  out << "~CURVE INFORMATION\n";
  for (const auto& c : log.curves) {
    out << ' ' << c.mnemonic << '.' << c.unit << " : " << c.description << '\n';
  }
  out << "~ASCII\n";
  for (const auto& row : log.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ' ';
      out << format_number(row[i] ? *row[i] : log.null_value);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace seisreg
