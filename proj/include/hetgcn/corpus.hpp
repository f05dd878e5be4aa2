#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hetgcn {

// The 17 core Universal Dependencies part-of-speech tags. Anything a tagger
// emits outside this set is mapped to X at ingestion.
enum class UdTag : std::uint8_t {
    ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM,
    PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X,
};

inline constexpr int kNumUdTags = 17;

const std::string& ud_tag_name(UdTag tag);

// Maps a tag string to the UD set; unknown tags yield X and set *known=false.
UdTag ud_tag_from_string(const std::string& s, bool* known = nullptr);

struct Token {
    std::string surface;  // original casing, non-empty, no whitespace
    UdTag pos = UdTag::X;
};

enum class Split : std::uint8_t { Train, Valid, Test, Unlabeled };

const std::string& split_name(Split s);
std::optional<Split> split_from_string(const std::string& s);

struct Document {
    std::string id;
    std::string language;  // ISO 639-1 code
    std::vector<Token> tokens;
    std::optional<int> label;  // class index in [0, C)
    Split split = Split::Train;
    std::optional<std::string> translation_of;  // id of the original document
};

// Validated, immutable after load. Document order is the file order, which
// downstream node indexing relies on.
struct CorpusStore {
    std::vector<Document> docs;
    std::unordered_map<std::string, std::size_t> index_by_id;
    std::set<std::string> languages;
    int num_classes = 0;
    // Count of out-of-set POS tags seen at load, keyed by the original tag string.
    std::map<std::string, std::size_t> unknown_pos_counts;

    const Document& doc_by_id(const std::string& id) const;
};

// Parses and validates a JSON Lines corpus. Every record must carry
// id / language / tokens / split; label and translation_of are optional.
// Malformed records, duplicate ids, dangling or same-language translation
// references, out-of-range labels, and train records without a label all
// raise ValidationError naming the offending record.
CorpusStore load_corpus(const std::string& path, int num_classes);

// Builds a CorpusStore from in-memory documents (same validation as load_corpus).
CorpusStore make_corpus(std::vector<Document> docs, int num_classes);

// Serializes documents back to the JSON Lines schema.
void write_corpus(const std::string& path, const std::vector<Document>& docs);
std::string corpus_record_json(const Document& doc);

// One unordered pair per translation_of reference, deduplicated; each pair is
// ordered and listed by corpus position for determinism.
std::vector<std::pair<std::string, std::string>> link_translations(const CorpusStore& store);

}  // namespace hetgcn
