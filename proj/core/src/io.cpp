#include "slopp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>
#include <vector>

namespace slopp {

FileFormatError::FileFormatError(std::string path, std::size_t line, std::string message)
    : Error(path + ":" + std::to_string(line) + ": " + message),
      path_(std::move(path)),
      line_(line < 1 ? 1 : line),
      message_(std::move(message)) {}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next line with any trailing '\r' removed; false at end of input.
  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw FileFormatError(source_, line_no_, message);
  }

  std::size_t line_no() const { return line_no_; }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

bool is_comment(std::string_view s) {
  s = trim(s);
  return s == "c" || s.starts_with("c ") || s.starts_with("c\t");
}

template <typename Int>
Int parse_int(const LineReader& r, std::string_view tok, const char* what) {
  Int v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    r.fail("bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

double parse_real(const LineReader& r, std::string_view tok, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || std::isnan(v)) {
    r.fail("bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path.string(), 1, "cannot open file");
  return in;
}

// Reads the "<tag> <count>" header, skipping comments and blank lines.
std::size_t read_header(LineReader& r, std::string_view tag) {
  std::string line;
  while (r.next(line)) {
    if (blank(line) || is_comment(line)) continue;
    auto toks = split_ws(line);
    if (toks.size() != 2 || toks[0] != tag) r.fail("expected header '" + std::string(tag) + " N'");
    return parse_int<std::size_t>(r, toks[1], "node count");
  }
  r.fail("missing header '" + std::string(tag) + " N'");
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::string line;
  Dataset data;
  bool first = true;
  Assignment values;
  while (r.next(line)) {
    if (blank(line)) continue;
    values.clear();
    std::string_view rest = line;
    for (;;) {
      auto comma = rest.find(',');
      auto tok = trim(rest.substr(0, comma));
      if (tok == "0") {
        values.push_back(0);
      } else if (tok == "1") {
        values.push_back(1);
      } else {
        r.fail("non-binary value '" + std::string(tok) + "'");
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (first) {
      data = Dataset(values.size());
      first = false;
    } else if (values.size() != data.num_vars()) {
      r.fail("row has " + std::to_string(values.size()) + " values, expected " +
             std::to_string(data.num_vars()));
    }
    data.add(values);
  }
  return data.aggregated();
}

Dataset load_dataset(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_dataset(in, path.string());
}

Vtree parse_vtree(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  const std::size_t declared = read_header(r, "vtree");
  std::map<long long, VtreeId> ids;
  std::map<Var, std::size_t> var_line;
  std::vector<VtreeNode> nodes;
  std::string line;
  while (r.next(line)) {
    if (blank(line) || is_comment(line)) continue;
    auto toks = split_ws(line);
    auto id = parse_int<long long>(r, toks.size() > 1 ? toks[1] : std::string_view{}, "node id");
    if (ids.contains(id)) r.fail("duplicate node id " + std::to_string(id));
    auto ref = [&](std::string_view tok) {
      auto child = parse_int<long long>(r, tok, "child id");
      auto it = ids.find(child);
      if (it == ids.end()) r.fail("reference to undeclared node " + std::to_string(child));
      return it->second;
    };
    if (toks[0] == "L" && toks.size() == 3) {
      auto v = parse_int<Var>(r, toks[2], "variable");
      if (v == 0) r.fail("variables are numbered from 1");
      if (var_line.contains(v)) r.fail("variable " + std::to_string(v) + " appears twice");
      var_line[v] = r.line_no();
      nodes.push_back(VtreeNode::leaf(v));
    } else if (toks[0] == "I" && toks.size() == 4) {
      nodes.push_back(VtreeNode::internal(ref(toks[2]), ref(toks[3])));
    } else {
      r.fail("unknown or malformed vtree line '" + line + "'");
    }
    ids[id] = vtree_id(nodes.size() - 1);
  }
  if (nodes.size() != declared) {
    r.fail("header declares " + std::to_string(declared) + " nodes, found " +
           std::to_string(nodes.size()));
  }
  try {
    return Vtree(std::move(nodes));
  } catch (const StructuralError& e) {
    r.fail(e.what());
  }
}

void format_vtree(const Vtree& vtree, std::ostream& out) {
  out << "c ids of vtree nodes start at 0\n"
      << "c L id-of-leaf-vtree-node id-of-variable\n"
      << "c I id-of-internal-vtree-node id-of-left-child id-of-right-child\n"
      << "vtree " << vtree.size() << '\n';
  for (std::size_t i = 0; i < vtree.size(); ++i) {
    const VtreeNode& n = vtree.node(vtree_id(i));
    if (n.is_leaf()) {
      out << "L " << i << ' ' << n.var << '\n';
    } else {
      out << "I " << i << ' ' << index(n.left) << ' ' << index(n.right) << '\n';
    }
  }
}

Vtree read_vtree(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_vtree(in, path.string());
}

void write_vtree(const Vtree& vtree, const std::filesystem::path& path) {
  std::ostringstream out;
  format_vtree(vtree, out);
  write_file_atomic(path, out.str());
}

Circuit parse_psdd(std::istream& in, const Vtree& vtree, const std::string& source) {
  LineReader r(in, source);
  const std::size_t declared = read_header(r, "psdd");
  std::map<long long, NodeId> ids;
  std::vector<PsddNode> nodes;
  std::string line;

  auto vtree_ref = [&](std::string_view tok) {
    auto v = parse_int<std::size_t>(r, tok, "vtree id");
    if (v >= vtree.size()) r.fail("vtree node " + std::to_string(v) + " does not exist");
    return vtree_id(v);
  };
  auto check_leaf = [&](VtreeId v, Var var) {
    if (var == 0 || var > vtree.num_vars()) r.fail("variable " + std::to_string(var) + " out of range");
    if (!vtree.is_leaf(v) || vtree.var(v) != var) {
      r.fail("vtree node " + std::to_string(index(v)) + " is not the leaf of variable " +
             std::to_string(var));
    }
  };

  while (r.next(line)) {
    if (blank(line) || is_comment(line)) continue;
    auto toks = split_ws(line);
    if (toks.size() < 3) r.fail("malformed psdd line '" + line + "'");
    auto id = parse_int<long long>(r, toks[1], "node id");
    if (ids.contains(id)) r.fail("duplicate node id " + std::to_string(id));
    VtreeId v = vtree_ref(toks[2]);
    if (toks[0] == "L") {
      if (toks.size() != 4) r.fail("literal line needs 4 fields");
      auto lit = parse_int<long long>(r, toks[3], "literal");
      Var var = static_cast<Var>(lit < 0 ? -lit : lit);
      check_leaf(v, var);
      nodes.push_back({v, LiteralUnit{var, lit > 0}});
    } else if (toks[0] == "T") {
      if (toks.size() != 5) r.fail("true-unit line needs 5 fields");
      auto var = parse_int<Var>(r, toks[3], "variable");
      check_leaf(v, var);
      nodes.push_back({v, TrueUnit{var, parse_real(r, toks[4], "log theta")}});
    } else if (toks[0] == "D") {
      if (toks.size() < 4) r.fail("decision line needs an element count");
      auto k = parse_int<std::size_t>(r, toks[3], "element count");
      if (k == 0) r.fail("decision node without elements");
      if (toks.size() != 4 + 3 * k) {
        r.fail("decision node declares " + std::to_string(k) + " elements but has " +
               std::to_string(toks.size() - 4) + " element fields");
      }
      SumUnit s;
      double total = 0.0;
      for (std::size_t e = 0; e < k; ++e) {
        auto child = [&](std::string_view tok) {
          auto c = parse_int<long long>(r, tok, "child id");
          auto it = ids.find(c);
          if (it == ids.end()) r.fail("reference to undeclared node " + std::to_string(c));
          return it->second;
        };
        Element el{child(toks[4 + 3 * e]), child(toks[5 + 3 * e]),
                   parse_real(r, toks[6 + 3 * e], "log weight")};
        total += std::exp(el.log_weight);
        s.elements.push_back(el);
      }
      if (!(std::abs(total - 1.0) <= 1e-6)) {
        r.fail("element weights sum to " + format_double(total));
      }
      nodes.push_back({v, std::move(s)});
    } else {
      r.fail("unknown psdd node tag '" + std::string(toks[0]) + "'");
    }
    ids[id] = node_id(nodes.size() - 1);
  }
  if (nodes.size() != declared) {
    r.fail("header declares " + std::to_string(declared) + " nodes, found " +
           std::to_string(nodes.size()));
  }
  if (nodes.empty()) r.fail("psdd has no nodes");
  const NodeId root = node_id(nodes.size() - 1);
  try {
    return Circuit(vtree, std::move(nodes), root);
  } catch (const StructuralError& e) {
    r.fail(e.what());
  }
}

void format_psdd(const Circuit& circuit, std::ostream& out) {
  auto nodes = circuit.nodes();
  out << "c ids of psdd nodes start at 0\n"
      << "c psdd nodes appear bottom-up, children before parents\n"
      << "c L id-of-literal-psdd-node id-of-vtree literal\n"
      << "c T id-of-true-psdd-node id-of-vtree variable log(theta)\n"
      << "c D id-of-decomposition-psdd-node id-of-vtree number-of-elements "
         "{id-of-prime id-of-sub log(weight)}*\n"
      << "psdd " << nodes.size() << '\n';
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const PsddNode& n = nodes[i];
    const std::size_t v = index(n.vtree);
    if (n.is_literal()) {
      const auto& lit = n.literal();
      out << "L " << i << ' ' << v << ' ' << (lit.positive ? "" : "-") << lit.var << '\n';
    } else if (n.is_true()) {
      const auto& t = n.true_unit();
      out << "T " << i << ' ' << v << ' ' << t.var << ' ' << format_double(t.log_theta) << '\n';
    } else {
      out << "D " << i << ' ' << v << ' ' << n.elements().size();
      for (const auto& e : n.elements()) {
        out << ' ' << index(e.prime) << ' ' << index(e.sub) << ' ' << format_double(e.log_weight);
      }
      out << '\n';
    }
  }
}

Circuit read_psdd(const std::filesystem::path& path, const Vtree& vtree) {
  auto in = open_input(path);
  return parse_psdd(in, vtree, path.string());
}

std::filesystem::path vtree_path_for(const std::filesystem::path& psdd_path) {
  auto p = psdd_path;
  p.replace_extension(".vtree");
  return p;
}

Circuit read_psdd(const std::filesystem::path& path) {
  return read_psdd(path, read_vtree(vtree_path_for(path)));
}

void write_psdd(const Circuit& circuit, const std::filesystem::path& path) {
  std::ostringstream out;
  format_psdd(circuit, out);
  write_file_atomic(path, out.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename into " + path.string());
  }
}

}  // namespace slopp
