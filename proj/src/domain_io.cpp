#include "collex/domain_io.hpp"

#include <charconv>
#include <optional>
#include <set>

#include "collex/errors.hpp"
#include "collex/text_io.hpp"

namespace collex {

namespace {

struct RawBlock {
  std::optional<std::string> label;
  std::vector<std::string> names;
  std::size_t line;
};

double parse_cost(const std::string& token, std::size_t line) {
  double value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size() || value < 0)
    throw ParseError(line, "invalid cost '" + token + "'");
  return value;
}

}  // namespace

DomainFile parse_domain(std::string_view text, const UniversePtr& universe) {
  std::vector<RawBlock> raw;
  std::map<std::string, std::vector<std::string>> pre;
  std::map<std::string, double> costs;
  std::map<std::string, std::size_t> directive_lines;

  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = strip_comment(text.substr(start, end - start));
    start = end + 1;
    ++line_number;
    auto tokens = tokenize(line, line_number);
    if (tokens.empty()) continue;

    if (tokens[0] == "expert") {
      if (tokens.size() < 3) throw ParseError(line_number, "expected 'expert <id> pre|cost ...'");
      const auto& id = tokens[1];
      directive_lines.emplace(id, line_number);
      if (tokens[2] == "pre") {
        auto& known = pre[id];
        known.insert(known.end(), tokens.begin() + 3, tokens.end());
      } else if (tokens[2] == "cost") {
        if (tokens.size() != 4) throw ParseError(line_number, "expected 'expert <id> cost <value>'");
        costs[id] = parse_cost(tokens[3], line_number);
      } else {
        throw ParseError(line_number, "unknown expert directive '" + tokens[2] + "'");
      }
      continue;
    }

    RawBlock block{std::nullopt, {}, line_number};
    std::size_t first = 0;
    if (tokens[0].size() > 1 && tokens[0].back() == ':') {
      block.label = tokens[0].substr(0, tokens[0].size() - 1);
      first = 1;
    } else if (tokens.size() > 1 && tokens[1] == ":") {
      block.label = tokens[0];
      first = 2;
    }
    for (std::size_t i = first; i < tokens.size(); ++i) block.names.push_back(tokens[i]);
    if (block.names.empty()) throw ParseError(line_number, "empty block");
    raw.push_back(std::move(block));
  }
  if (raw.empty()) throw ParseError(line_number, "no blocks");

  UniversePtr m = universe;
  if (!m) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& b : raw)
      for (const auto& n : b.names)
        if (seen.insert(n).second) names.push_back(n);
    m = make_universe(names);
  }

  std::vector<std::string> ids;
  std::vector<AttributeSet> blocks;
  std::set<std::string> taken;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto id = raw[i].label.value_or(std::to_string(i + 1));
    if (!taken.insert(id).second) throw ParseError(raw[i].line, "duplicate block label '" + id + "'");
    AttributeSet s(m->size());
    for (const auto& n : raw[i].names) {
      auto idx = m->find(n);
      if (!idx) throw ParseError(raw[i].line, "unknown attribute '" + n + "'");
      s.insert(*idx);
    }
    ids.push_back(std::move(id));
    blocks.push_back(std::move(s));
  }
  for (const auto& [id, line] : directive_lines)
    if (!taken.count(id)) throw ParseError(line, "directive for unknown block '" + id + "'");

  return DomainFile{ConsortialDomain(m, ids, blocks), std::move(pre), std::move(costs)};
}

DomainFile load_domain(const std::filesystem::path& path, const UniversePtr& universe) {
  return parse_domain(read_file(path), universe);
}

std::string write_domain(const ConsortialDomain& domain) {
  std::string out;
  for (std::size_t i = 0; i < domain.size(); ++i)
    out += quote_name(domain.id(i)) + ": " + domain.universe()->join(domain.block(i)) + "\n";
  return out;
}

Consortium build_consortium(const DomainFile& file, const TargetDomain& target, ConsortiumMode mode,
                            SelectionStrategy strategy) {
  const auto& d = file.domain;
  require_same_universe(d.universe(), target.universe(), "build_consortium");
  std::vector<LocalExpertSpec> experts;
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto known = file.pre_knowledge.find(d.id(i));
    auto spec = known == file.pre_knowledge.end()
                    ? LocalExpertSpec::expert(d.id(i), d.block(i), target)
                    : LocalExpertSpec::pre_expert(d.id(i), d.block(i), target, known->second);
    if (auto c = file.costs.find(d.id(i)); c != file.costs.end()) spec.cost = c->second;
    experts.push_back(std::move(spec));
  }
  return Consortium(d, std::move(experts), mode, strategy);
}

}  // namespace collex
