#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toxconv/core_model.hpp"

namespace fixture {

inline toxconv::Post post(std::string id, std::string author, std::optional<std::string> parent = std::nullopt,
                          toxconv::Timestamp time = 0, std::optional<double> toxicity = std::nullopt) {
    toxconv::Post p;
    p.id = std::move(id);
    p.author = std::move(author);
    p.parent = std::move(parent);
    p.time = time;
    p.toxicity = toxicity;
    p.text = "text";
    return p;
}

// Tree from (author, parent index, time) triples; entry 0 is the root.
struct Node {
    std::string author;
    int parent;
    toxconv::Timestamp time;
    std::optional<double> toxicity = std::nullopt;
};

inline toxconv::ReplyTree tree(const std::vector<Node>& nodes) {
    auto id = [](std::size_t i) { return "p" + std::to_string(100 + i); };
    toxconv::Post root = post(id(0), nodes[0].author, std::nullopt, nodes[0].time, nodes[0].toxicity);
    std::vector<toxconv::Post> replies;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        replies.push_back(post(id(i), nodes[i].author, id(static_cast<std::size_t>(nodes[i].parent)), nodes[i].time,
                               nodes[i].toxicity));
    return toxconv::ReplyTree::build(std::move(root), std::move(replies));
}

}  // namespace fixture
