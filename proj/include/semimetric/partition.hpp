#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "semimetric/error.hpp"

namespace semimetric {

using NodeSet = std::vector<std::size_t>;

enum class ObjectiveKind { none, modularity, normalized_modularity };

// Disjoint cover of 0..n-1 by nonempty clusters.
struct Partition {
    std::vector<NodeSet> clusters;
    double objective = 0.0;
    ObjectiveKind objective_kind = ObjectiveKind::none;

    // Clusters are ordered by label value; labels that never occur are dropped.
    static Partition from_labels(std::span<const std::size_t> labels)
    {
        std::size_t max_label = 0;
        for (auto l : labels)
            max_label = std::max(max_label, l);
        std::vector<NodeSet> buckets(labels.empty() ? 0 : max_label + 1);
        for (std::size_t i = 0; i < labels.size(); ++i)
            buckets[labels[i]].push_back(i);
        Partition p;
        for (auto& b : buckets)
            if (!b.empty())
                p.clusters.push_back(std::move(b));
        return p;
    }

    std::size_t size() const noexcept { return clusters.size(); }

    std::size_t node_count() const noexcept
    {
        std::size_t n = 0;
        for (const auto& c : clusters)
            n += c.size();
        return n;
    }

    // labels[i] = index of the cluster holding node i.
    std::vector<std::size_t> labels() const
    {
        const std::size_t n = node_count();
        std::vector<std::size_t> out(n, std::numeric_limits<std::size_t>::max());
        for (std::size_t k = 0; k < clusters.size(); ++k)
            for (auto i : clusters[k]) {
                if (i >= n)
                    throw Error(Errc::contract_violation, "partition node id out of range");
                out[i] = k;
            }
        return out;
    }

    // Throws unless the clusters are nonempty, disjoint, and cover 0..n-1.
    void validate(std::size_t n) const
    {
        std::vector<char> seen(n, 0);
        std::size_t count = 0;
        for (const auto& c : clusters) {
            if (c.empty())
                throw Error(Errc::contract_violation, "partition has an empty cluster");
            for (auto i : c) {
                if (i >= n)
                    throw Error(Errc::contract_violation, "partition node id out of range");
                if (seen[i])
                    throw Error(Errc::contract_violation, "partition clusters overlap");
                seen[i] = 1;
                ++count;
            }
        }
        if (count != n)
            throw Error(Errc::contract_violation, "partition does not cover every node");
    }

    // Members sorted, clusters ordered by smallest member.
    Partition canonical() const
    {
        Partition p = *this;
        for (auto& c : p.clusters)
            std::sort(c.begin(), c.end());
        std::erase_if(p.clusters, [](const NodeSet& c) { return c.empty(); });
        std::sort(p.clusters.begin(), p.clusters.end(),
                  [](const NodeSet& a, const NodeSet& b) { return a.front() < b.front(); });
        return p;
    }

    bool same_clusters(const Partition& other) const
    {
        return canonical().clusters == other.canonical().clusters;
    }
};

} // namespace semimetric
