#include "hetgcn/synth.hpp"

#include <algorithm>

#include "hetgcn/errors.hpp"
#include "hetgcn/rng.hpp"

namespace hetgcn {

namespace {

const char* kLanguageCodes[] = {"en", "de", "fr", "es", "ja", "ru", "th", "zh"};

std::string language_code(int index) {
    if (index < 8) return kLanguageCodes[index];
    return "x" + std::to_string(index);
}

std::string word_surface(const std::string& lang, int index) { return lang + "w" + std::to_string(index); }

}  // namespace

SynthOutput synthesize(const SynthParams& p) {
    if (p.languages < 2) throw ValidationError("synth: at least 2 languages are required");
    if (p.docs_per_language < 1) throw ValidationError("synth: docs_per_language must be >= 1");
    if (p.classes < 2) throw ValidationError("synth: classes must be >= 2");
    if (p.vocab_per_language < p.classes) throw ValidationError("synth: vocab must be >= classes");
    if (p.dim < 1) throw ValidationError("synth: dim must be >= 1");
    if (p.keyword_strength < 0.0) throw ValidationError("synth: keyword_strength must be >= 0");
    if (p.translation_fraction < 0.0 || p.translation_fraction > 1.0) {
        throw ValidationError("synth: translation_fraction must be in [0, 1]");
    }
    if (p.unlabeled < 0) throw ValidationError("synth: unlabeled must be >= 0");

    rng::SplitMix gen(rng::derive_stream(p.seed, "synth"));
    const std::uint64_t embed_seed = rng::derive_stream(p.seed, "synth-embed");

    // Keywords per class: a small class-pure block at the front of each
    // language's vocabulary; the rest is a shared noise pool.
    const int kw_per_class = std::max(1, std::min(p.vocab_per_language / (4 * p.classes),
                                                  p.vocab_per_language / p.classes));
    const int noise_start = kw_per_class * p.classes;

    const auto make_tokens = [&](const std::string& lang, int cls) {
        std::vector<Token> tokens;
        const int n_keywords = 2 + static_cast<int>(gen.bounded(4));   // 2..5
        const int n_noise = 6 + static_cast<int>(gen.bounded(6));      // 6..11
        for (int i = 0; i < n_keywords; ++i) {
            const int w = cls * kw_per_class + static_cast<int>(gen.bounded(static_cast<std::uint64_t>(kw_per_class)));
            tokens.push_back({word_surface(lang, w), gen.bounded(2) == 0 ? UdTag::NOUN : UdTag::ADJ});
        }
        for (int i = 0; i < n_noise; ++i) {
            const int w = noise_start +
                          static_cast<int>(gen.bounded(static_cast<std::uint64_t>(p.vocab_per_language - noise_start)));
            tokens.push_back({word_surface(lang, w), static_cast<UdTag>(gen.bounded(kNumUdTags))});
        }
        rng::shuffle(tokens, gen);
        return tokens;
    };

    SynthOutput out;
    std::vector<int> latent_class;  // per generated doc, for embedding offsets

    const std::string source_lang = language_code(0);
    std::vector<std::vector<std::string>> source_ids_by_class(static_cast<std::size_t>(p.classes));
    for (int i = 0; i < p.docs_per_language; ++i) {
        const int cls = i % p.classes;
        Document doc;
        doc.id = source_lang + std::to_string(i);
        doc.language = source_lang;
        doc.tokens = make_tokens(source_lang, cls);
        doc.label = cls;
        doc.split = Split::Train;
        source_ids_by_class[static_cast<std::size_t>(cls)].push_back(doc.id);
        out.docs.push_back(std::move(doc));
        latent_class.push_back(cls);
    }

    for (int li = 1; li < p.languages; ++li) {
        const std::string lang = language_code(li);
        for (int i = 0; i < p.docs_per_language; ++i) {
            const int cls = i % p.classes;
            Document doc;
            doc.id = lang + std::to_string(i);
            doc.language = lang;
            doc.tokens = make_tokens(lang, cls);
            doc.label = cls;
            // Alternate whole class cycles so valid and test stay class-balanced.
            doc.split = ((i / p.classes) % 2 == 0) ? Split::Valid : Split::Test;
            if (gen.next_double() < p.translation_fraction) {
                const auto& pool = source_ids_by_class[static_cast<std::size_t>(cls)];
                doc.translation_of = pool[gen.bounded(pool.size())];
            }
            out.docs.push_back(std::move(doc));
            latent_class.push_back(cls);
        }
    }

    // Unlabeled in-domain pool, spread round-robin over the target languages.
    for (int i = 0; i < p.unlabeled; ++i) {
        const std::string lang = language_code(1 + i % (p.languages - 1));
        const int cls = i % p.classes;
        Document doc;
        doc.id = lang + "u" + std::to_string(i);
        doc.language = lang;
        doc.tokens = make_tokens(lang, cls);
        doc.split = Split::Unlabeled;
        out.docs.push_back(std::move(doc));
        latent_class.push_back(cls);
    }

    // Embeddings: hashed base plus a class-direction offset for documents and
    // class keywords; noise words stay at the hashed base.
    const auto class_offset = [&](int cls) {
        Vector v = Vector::Zero(p.dim);
        v[static_cast<Index>(cls % p.dim)] = p.keyword_strength;
        return v;
    };
    for (std::size_t d = 0; d < out.docs.size(); ++d) {
        const std::string key = "doc:" + out.docs[d].id;
        Vector vec = hashed_features(key, p.dim, embed_seed) + class_offset(latent_class[d]);
        out.embeddings.emplace_back(key, std::move(vec));
    }
    for (int li = 0; li < p.languages; ++li) {
        const std::string lang = language_code(li);
        for (int w = 0; w < p.vocab_per_language; ++w) {
            const std::string key = "word:" + lang + ":" + word_surface(lang, w);
            Vector vec = hashed_features(key, p.dim, embed_seed);
            if (w < noise_start) {
                vec += class_offset(w / kw_per_class);
            }
            out.embeddings.emplace_back(key, std::move(vec));
        }
    }
    return out;
}

}  // namespace hetgcn
