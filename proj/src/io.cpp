#include "qbc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <unordered_map>

#include "qbc/error.hpp"

namespace qbc {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<long long> as_integer(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  long long v = 0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || r.ec != std::errc() || r.ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> out;
  std::string s;
  std::size_t n = 0;
  while (std::getline(in, s)) {
    ++n;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    out.push_back({n, std::move(s)});
  }
  return out;
}

class Interner {
 public:
  std::size_t id(std::string_view name) {
    auto [it, inserted] = index_.try_emplace(std::string(name), names_.size());
    if (inserted) names_.emplace_back(name);
    return it->second;
  }
  std::vector<std::string> take() { return std::move(names_); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
};

}  // namespace

BipartiteGraph load_edge_list(std::istream& in) {
  struct Pair {
    std::size_t line;
    std::string a, b;
  };
  auto lines = read_lines(in);
  std::vector<const Line*> data;
  for (const auto& l : lines) {
    auto t = trim(l.text);
    if (t.empty() || t.front() == '#') continue;
    data.push_back(&l);
  }

  char sep = ' ';
  if (std::any_of(data.begin(), data.end(), [](const Line* l) { return l->text.find('\t') != std::string::npos; })) {
    sep = '\t';
  } else if (std::any_of(data.begin(), data.end(),
                         [](const Line* l) { return l->text.find(',') != std::string::npos; })) {
    sep = ',';
  }

  std::vector<Pair> pairs;
  pairs.reserve(data.size());
  for (const Line* l : data) {
    std::vector<std::string_view> fields;
    std::string_view t = trim(l->text);
    if (sep == ' ') {
      fields = split_ws(t);
    } else {
      std::size_t start = 0;
      while (true) {
        auto pos = t.find(sep, start);
        fields.push_back(trim(t.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
      }
    }
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(l->number, "expected exactly two vertex ids, got '" + l->text + "'");
    }
    pairs.push_back({l->number, std::string(fields[0]), std::string(fields[1])});
  }

  bool integer_ids = std::all_of(pairs.begin(), pairs.end(), [](const Pair& p) {
    return as_integer(p.a).has_value() && as_integer(p.b).has_value();
  });

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  if (integer_ids) {
    std::size_t nu = 0, nv = 0;
    for (const auto& p : pairs) {
      long long a = *as_integer(p.a), b = *as_integer(p.b);
      if (a < 0 || b < 0) throw ParseError(p.line, "negative vertex id");
      edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
      nu = std::max(nu, static_cast<std::size_t>(a) + 1);
      nv = std::max(nv, static_cast<std::size_t>(b) + 1);
    }
    return BipartiteGraph(nu, nv, edges);
  }

  Interner us, vs;
  for (const auto& p : pairs) edges.emplace_back(us.id(p.a), vs.id(p.b));
  std::size_t nu = us.size(), nv = vs.size();
  return BipartiteGraph(nu, nv, edges, us.take(), vs.take());
}

BipartiteGraph load_pajek_two_mode(std::istream& in) {
  auto lines = read_lines(in);
  std::size_t total = 0, first_mode = 0;
  bool have_header = false;
  enum class Section { None, Vertices, Edges, EdgeList } section = Section::None;
  std::vector<std::string> names;
  bool any_name = false;
  std::vector<Edge> edges;

  auto endpoint = [&](std::size_t line, std::string_view tok) {
    auto v = as_integer(tok);
    if (!v || *v < 1 || static_cast<std::size_t>(*v) > total) {
      throw ParseError(line, "vertex id '" + std::string(tok) + "' outside 1.." + std::to_string(total));
    }
    return static_cast<std::size_t>(*v);
  };
  auto add_edge = [&](std::size_t line, std::size_t a, std::size_t b) {
    bool a_first = a <= first_mode, b_first = b <= first_mode;
    if (a_first == b_first) {
      throw FormatError(line, "edge " + std::to_string(a) + "-" + std::to_string(b) + " joins two vertices of the " +
                                  (a_first ? "first" : "second") + " mode");
    }
    if (!a_first) std::swap(a, b);
    edges.emplace_back(a - 1, b - first_mode - 1);
  };

  for (const auto& l : lines) {
    auto t = trim(l.text);
    if (t.empty() || t.front() == '%') continue;
    if (t.front() == '*') {
      auto toks = split_ws(t);
      auto key = lower(toks[0]);
      if (key == "*network") continue;
      if (key == "*vertices") {
        if (have_header) throw FormatError(l.number, "duplicate *Vertices header");
        if (toks.size() < 3) throw FormatError(l.number, "not a two-mode network: expected '*Vertices N M'");
        auto n = as_integer(toks[1]), m = as_integer(toks[2]);
        if (!n || !m || *n < 0 || *m < 0 || *m > *n) throw FormatError(l.number, "bad *Vertices counts");
        total = static_cast<std::size_t>(*n);
        first_mode = static_cast<std::size_t>(*m);
        names.assign(total, std::string());
        have_header = true;
        section = Section::Vertices;
        continue;
      }
      if (!have_header) throw FormatError(l.number, "missing *Vertices header");
      if (key == "*edges" || key == "*arcs") {
        section = Section::Edges;
      } else if (key == "*edgeslist" || key == "*arcslist") {
        section = Section::EdgeList;
      } else {
        throw FormatError(l.number, "unsupported Pajek section '" + std::string(toks[0]) + "'");
      }
      continue;
    }
    if (!have_header) throw FormatError(l.number, "missing *Vertices header");

    switch (section) {
      case Section::Vertices: {
        auto toks = split_ws(t);
        std::size_t id = endpoint(l.number, toks[0]);
        auto rest = trim(t.substr(toks[0].size()));
        std::string name;
        if (!rest.empty() && rest.front() == '"') {
          auto close = rest.find('"', 1);
          if (close == std::string_view::npos) throw ParseError(l.number, "unterminated vertex label");
          name = std::string(rest.substr(1, close - 1));
        } else if (!rest.empty()) {
          name = std::string(split_ws(rest)[0]);
        }
        if (!name.empty()) {
          names[id - 1] = std::move(name);
          any_name = true;
        }
        break;
      }
      case Section::Edges: {
        auto toks = split_ws(t);
        if (toks.size() < 2) throw ParseError(l.number, "edge line needs two endpoints");
        add_edge(l.number, endpoint(l.number, toks[0]), endpoint(l.number, toks[1]));
        break;
      }
      case Section::EdgeList: {
        auto toks = split_ws(t);
        std::size_t a = endpoint(l.number, toks[0]);
        for (std::size_t k = 1; k < toks.size(); ++k) add_edge(l.number, a, endpoint(l.number, toks[k]));
        break;
      }
      case Section::None:
        throw FormatError(l.number, "data outside any section");
    }
  }
  if (!have_header) throw FormatError(0, "missing *Vertices header");

  std::vector<std::string> u_labels, v_labels;
  if (any_name) {
    for (std::size_t k = 0; k < total; ++k) {
      std::string name = names[k].empty() ? std::to_string(k + 1) : names[k];
      (k < first_mode ? u_labels : v_labels).push_back(std::move(name));
    }
  }
  return BipartiteGraph(first_mode, total - first_mode, edges, std::move(u_labels), std::move(v_labels));
}

GraphFormat parse_graph_format(const std::string& name) {
  auto n = lower(name);
  if (n == "auto") return GraphFormat::Auto;
  if (n == "edgelist" || n == "edge-list" || n == "edges" || n == "tsv" || n == "csv") return GraphFormat::EdgeList;
  if (n == "pajek" || n == "net") return GraphFormat::Pajek;
  throw ArgumentError("unknown graph format '" + name + "'");
}

BipartiteGraph load_graph(const std::filesystem::path& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path.string() + "'");
  if (format == GraphFormat::Auto) {
    auto ext = lower(path.extension().string());
    format = (ext == ".net" || ext == ".paj") ? GraphFormat::Pajek : GraphFormat::EdgeList;
  }
  return format == GraphFormat::Pajek ? load_pajek_two_mode(in) : load_edge_list(in);
}

}  // namespace qbc
