#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hetgcn/corpus.hpp"
#include "hetgcn/embed.hpp"

namespace hetgcn {

// Planted-keyword bilingual benchmark generator. The first language is the
// labeled source (split=train); the remaining languages alternate valid/test
// and hold the unlabeled pool. A translation_fraction of the labeled target
// documents is paired to a source document of the same class.
struct SynthParams {
    int languages = 2;
    int docs_per_language = 200;
    int vocab_per_language = 50;
    int classes = 2;
    double keyword_strength = 0.5;
    double translation_fraction = 0.3;
    int unlabeled = 100;
    Index dim = 16;
    std::uint64_t seed = 0;
};

struct SynthOutput {
    std::vector<Document> docs;
    std::vector<std::pair<std::string, Vector>> embeddings;  // complete node-key table
};

SynthOutput synthesize(const SynthParams& params);

}  // namespace hetgcn
