#pragma once

#include <string>
#include <vector>

#include "taforge/codegen.hpp"
#include "taforge/gateway.hpp"

namespace taforge::reducer {

struct UniqueGroup {
  std::string topic_label;
  std::vector<int> indices;  // non-empty, subset of the input codebook
};

struct MergePolicy {
  // representative = lowest index; description taken from the representative;
  // quotes concatenated in index order up to the cap.
  int max_quotes_per_code = 3;
};

struct ReduceResult {
  std::vector<UniqueGroup> groups;
  std::vector<std::string> warnings;  // overlap normalization, singleton backfill
  std::string raw_response;           // preserved verbatim in groups.json
};

// Renders Prompt 2 over the raw codebook ('name': 'index' 'description' per
// topic) and parses the items/topic/indices reply. Any index outside the
// input set aborts with HallucinationError; uncovered indices are appended
// as singleton groups with a coverage warning; overlapping groups keep each
// index in its first group.
ReduceResult reduce(const codegen::Codebook& codebook, gateway::Gateway& gw,
                    const gateway::ModelConfig& model, const std::string& prompt_template);

struct MergeResult {
  codegen::Codebook codebook;          // stage reduced, dense indices
  std::vector<std::pair<int, int>> index_mapping;  // old -> new, total over input
};

MergeResult merge(const codegen::Codebook& codebook, const std::vector<UniqueGroup>& groups,
                  const MergePolicy& policy);

// Mechanical truncation at the last word boundary before char_limit, with an
// ellipsis marker. char_limit must be >= 40.
codegen::Codebook shorten_descriptions(const codegen::Codebook& codebook, int char_limit);

std::string groups_to_json(const ReduceResult& result);
std::vector<UniqueGroup> groups_from_json(std::string_view data);

}  // namespace taforge::reducer
