#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "toxconv/core_model.hpp"
#include "toxconv/features.hpp"
#include "toxconv/snapshots.hpp"

namespace toxconv::synth {

// P(reply toxic | parent toxic, follow edge type), indexed
// [parent_toxic][edge] with edge order mutual, child_follows_parent,
// parent_follows_child, none (the analysis EdgeType order).
using PlantedTable = std::array<std::array<double, 4>, 2>;

inline constexpr PlantedTable kDefaultPlanted{{
    {0.12, 0.158, 0.10, 0.18},   // nontoxic parent
    {0.22, 0.24, 0.23, 0.30},    // toxic parent
}};

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::size_t n_conversations = 100;

    // User pool and follow graph (stochastic block model).
    std::size_t n_users = 1500;
    std::size_t n_communities = 10;
    std::size_t n_outlets = 20;          // tracked accounts that post the roots
    double p_in = 0.25;
    double p_out = 0.01;
    double follower_mu = 4.0;            // lognormal extra followers
    double follower_sigma = 1.5;

    // Tree growth.
    std::size_t min_replies = 2;
    std::size_t max_replies = 60;
    double size_mu = 2.3;                // lognormal reply count above the minimum
    double size_sigma = 0.8;
    double root_weight = 3.0;
    double recency_weight = 2.0;
    double mean_gap_seconds = 60.0;

    // Participants.
    double reuse_prob = 0.35;            // reply by someone already present
    double cohesion = 0.5;               // new participant from the home community
    double back_and_forth = 0.2;         // reply by the author of the grandparent

    // Toxicity.
    double root_toxic_prob = 0.2;
    PlantedTable planted = kDefaultPlanted;
    // Logit offsets by embeddedness bin floor(log2(1 + common friends)),
    // the last entry covering every higher bin. Empty means no effect.
    std::vector<double> embeddedness_logit;

    // Conversation latents: z_s drives structure, z_c drives content.
    double structure_effect = 0.0;       // logit change per unit z_s
    double structure_shape = 0.0;        // strength of z_s on cohesion, recency, back-and-forth
    double content_effect = 0.0;         // logit change per unit z_c
    double content_score_shift = 0.0;    // within-class score tilt per unit z_c

    // Alignment.
    double url_prob = 0.3;

    // Injected filter violations, for negative tests.
    std::size_t orphan_replies = 0;      // replies whose parent is absent
    std::size_t untracked_roots = 0;     // conversations rooted at an untracked user
    std::size_t solo_conversations = 0;  // root author replying to themselves only
};

// Reads a JSON object; absent keys keep their defaults. Throws InvalidConfig.
GeneratorConfig config_from_json(const std::string& text);
std::string config_to_json(const GeneratorConfig& config);
void validate(const GeneratorConfig& config);

struct Corpus {
    std::vector<Post> posts;                         // roots first within each conversation, by time
    std::vector<std::pair<std::string, Snapshot>> snapshots;
    features::AlignmentTable alignment;
    std::set<std::string> tracked;
    std::vector<double> z_structure, z_content;      // per conversation

    SnapshotStore store() const;
};

// Deterministic in the config: the same config gives byte-identical files.
Corpus generate(const GeneratorConfig& config);

// posts.jsonl, snapshots.jsonl, alignment.tsv, tracked.txt, latents.csv,
// config.json under `dir`.
void write_corpus(const Corpus& corpus, const GeneratorConfig& config, const std::filesystem::path& dir);

}  // namespace toxconv::synth
