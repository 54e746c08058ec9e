#include "collex/text_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace collex {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  return lines;
}

std::optional<std::size_t> parse_count(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (quoted && line[i] == '\\') {
      ++i;
      continue;
    }
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && line[i] == '#') return line.substr(0, i);
  }
  return line;
}

std::vector<std::string> tokenize(std::string_view line, std::size_t line_number) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::string tok;
    if (line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          tok += line[i + 1];
          i += 2;
        } else if (line[i] == '"') {
          ++i;
          closed = true;
          break;
        } else {
          tok += line[i++];
        }
      }
      if (!closed) throw ParseError(line_number, "unterminated quote");
    } else {
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') tok += line[i++];
    }
    out.push_back(std::move(tok));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FormalContext parse_burmeister(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  auto skip_blank = [&] {
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
  };
  auto need = [&](const char* what) -> std::string_view {
    skip_blank();
    if (i >= lines.size()) throw ParseError(lines.size(), std::string("unexpected end of file, expected ") + what);
    return lines[i++];
  };

  skip_blank();
  if (i >= lines.size() || trim(lines[i]) != "B") throw ParseError(i + 1, "expected 'B' header");
  ++i;

  // An optional context name precedes the counts.
  skip_blank();
  if (i < lines.size() && !parse_count(lines[i])) ++i;

  auto count_line = need("object count");
  auto objects = parse_count(count_line);
  if (!objects) throw ParseError(i, "expected object count, got '" + std::string(trim(count_line)) + "'");
  count_line = need("attribute count");
  auto attributes = parse_count(count_line);
  if (!attributes) throw ParseError(i, "expected attribute count, got '" + std::string(trim(count_line)) + "'");

  std::vector<std::string> object_names, attribute_names;
  for (std::size_t k = 0; k < *objects; ++k) object_names.emplace_back(trim(need("object name")));
  for (std::size_t k = 0; k < *attributes; ++k) attribute_names.emplace_back(trim(need("attribute name")));

  UniversePtr g, m;
  try {
    g = make_universe(object_names);
    m = make_universe(attribute_names);
  } catch (const InvariantError& e) {
    throw ParseError(i, e.what());
  }

  std::vector<AttributeSet> rows;
  for (std::size_t k = 0; k < *objects; ++k) {
    auto row_text = trim(need("incidence row"));
    if (row_text.size() != *attributes)
      throw ParseError(i, "row for '" + object_names[k] + "' has " + std::to_string(row_text.size()) +
                              " entries, expected " + std::to_string(*attributes));
    AttributeSet row(*attributes);
    for (std::size_t a = 0; a < row_text.size(); ++a) {
      const char c = row_text[a];
      if (c == 'X' || c == 'x')
        row.insert(a);
      else if (c != '.')
        throw ParseError(i, std::string("invalid incidence character '") + c + "'");
    }
    rows.push_back(std::move(row));
  }
  skip_blank();
  if (i < lines.size()) throw ParseError(i + 1, "trailing content after incidence rows");
  return FormalContext(std::move(g), std::move(m), std::move(rows));
}

FormalContext load_burmeister(const std::filesystem::path& path) { return parse_burmeister(read_file(path)); }

std::string write_burmeister(const FormalContext& ctx) {
  std::string out = "B\n\n";
  out += std::to_string(ctx.objects()->size()) + "\n" + std::to_string(ctx.attributes()->size()) + "\n\n";
  for (const auto& n : ctx.objects()->names()) out += n + "\n";
  for (const auto& n : ctx.attributes()->names()) out += n + "\n";
  for (const auto& row : ctx.rows()) {
    for (std::size_t a = 0; a < ctx.attributes()->size(); ++a) out += row.contains(a) ? 'X' : '.';
    out += '\n';
  }
  return out;
}

Implication parse_implication(const Universe& universe, std::string_view line, std::size_t line_number) {
  auto tokens = tokenize(strip_comment(line), line_number);
  AttributeSet premise(universe.size()), conclusion(universe.size());
  bool seen_arrow = false;
  for (const auto& t : tokens) {
    if (t == "->") {
      if (seen_arrow) throw ParseError(line_number, "more than one '->'");
      seen_arrow = true;
      continue;
    }
    auto idx = universe.find(t);
    if (!idx) throw ParseError(line_number, "unknown attribute '" + t + "'");
    (seen_arrow ? conclusion : premise).insert(*idx);
  }
  if (!seen_arrow) throw ParseError(line_number, "missing '->'");
  return {std::move(premise), std::move(conclusion)};
}

ImplicationTheory parse_implications(const UniversePtr& universe, std::string_view text) {
  ImplicationTheory theory(universe);
  std::size_t n = 0;
  for (auto line : split_lines(text)) {
    ++n;
    if (trim(strip_comment(line)).empty()) continue;
    theory.add(parse_implication(*universe, line, n));
  }
  return theory;
}

std::string format_implication(const Universe& universe, const Implication& f) {
  auto premise = universe.join(f.premise);
  auto conclusion = universe.join(f.conclusion - f.premise);
  std::string out = premise;
  if (!out.empty()) out += ' ';
  out += "->";
  if (!conclusion.empty()) out += ' ' + conclusion;
  return out;
}

std::string write_implications(const ImplicationTheory& theory) {
  std::string out;
  for (const auto& f : theory) out += format_implication(*theory.universe(), f) + "\n";
  return out;
}

}  // namespace collex
