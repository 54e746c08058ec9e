#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "collex/consortium.hpp"

namespace collex {

/// Consortial-domain file:
///
///   # comment
///   alice: ro fl          labelled block
///   fl ed                 unlabelled block, labelled by its position
///   expert alice pre ball sphere
///   expert bob cost 2.5
///
/// `pre` turns the expert into a pre-expert knowing only the listed objects.
struct DomainFile {
  ConsortialDomain domain;
  std::map<std::string, std::vector<std::string>> pre_knowledge;
  std::map<std::string, double> costs;
};

// Without a universe, attributes are numbered in order of first appearance.
DomainFile parse_domain(std::string_view text, const UniversePtr& universe = nullptr);
DomainFile load_domain(const std::filesystem::path& path, const UniversePtr& universe = nullptr);
std::string write_domain(const ConsortialDomain& domain);

// Experts per block over the target, with the file's directives applied.
Consortium build_consortium(const DomainFile& file, const TargetDomain& target,
                            ConsortiumMode mode = ConsortiumMode::Strong, SelectionStrategy strategy = {});

}  // namespace collex
