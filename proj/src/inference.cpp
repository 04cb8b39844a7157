#include "spamtree/inference.hpp"

#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "spamtree/ontology.hpp"

namespace spamtree {

namespace {

struct PropertyKey {
    std::string subject, predicate_local;
    bool operator==(const PropertyKey&) const = default;
};

struct PropertyKeyHash {
    std::size_t operator()(const PropertyKey& k) const {
        return std::hash<std::string>()(k.subject) * 1315423911u ^
               std::hash<std::string>()(k.predicate_local);
    }
};

double parse_double_or_throw(const std::string& s, const std::string& subject,
                             const char* what) {
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (s.empty() || end != begin + s.size())
        throw GraphError("subject '" + subject + "': " + what + " value '" + s +
                         "' is not numeric");
    return v;
}

}  // namespace

// Indexed view of one ontology graph, built once so batches of lookups stay
// cheap. Walks the triples directly — this is the classification path the
// exported graphs exist for.
class GraphClassifier::Impl {
public:
    Impl(const OntologyGraph& g, const std::vector<std::string>& feature_names)
        : graph_(g), feature_names_(feature_names) {
        const std::string rel = kRelationNamespace;
        // index pointers refer into graph_ (owned), never into the caller's g
        for (const Triple& t : graph_.triples()) {
            if (t.predicate.rfind(rel, 0) != 0)
                throw GraphError("predicate '" + t.predicate +
                                 "' outside the relation namespace");
            std::string local = t.predicate.substr(rel.size());
            if (local == pred::kRootPrediction) {
                adtree_shape_ = true;
                root_subject_ = t.subject;
            }
            auto [it, fresh] = props_.try_emplace({t.subject, local});
            if (!fresh) throw GraphError("subject '" + t.subject + "' repeats predicate '" +
                                         local + "'");
            it->second = &t;
            if (!subject_seen_.count(t.subject)) {
                subject_seen_[t.subject] = true;
                subject_order_.push_back(t.subject);
            }
        }
        if (adtree_shape_) {
            // units in creation order: Test<u> subjects sorted by u
            for (const std::string& subject : subject_order_) {
                if (subject == root_subject_) continue;
                std::size_t pos = subject.rfind("Test");
                if (pos == std::string::npos)
                    throw GraphError("subject '" + subject + "' is not of the form Test<n>");
                units_.emplace_back(std::atoi(subject.c_str() + pos + 4), subject);
            }
            std::sort(units_.begin(), units_.end());
        } else {
            // the root test is the one subject never referenced as a child
            std::unordered_map<std::string, bool> referenced;
            for (const auto& [key, t] : props_)
                if (key.predicate_local == pred::kTrueChild ||
                    key.predicate_local == pred::kFalseChild)
                    referenced[t->object] = true;
            for (const std::string& subject : subject_order_)
                if (!referenced.count(subject)) root_subject_ = subject;
            if (root_subject_.empty()) throw GraphError("graph has no root node");
        }
    }

    const Triple* find(const std::string& subject, const char* local) const {
        auto it = props_.find({subject, local});
        return it == props_.end() ? nullptr : it->second;
    }

    const Triple* need(const std::string& subject, const char* local) const {
        const Triple* t = find(subject, local);
        if (!t)
            throw GraphError("subject '" + subject + "' is missing " + local);
        return t;
    }

    std::size_t feature_of(const std::string& name) const {
        for (std::size_t i = 0; i < feature_names_.size(); ++i)
            if (feature_names_[i] == name) return i;
        throw ModelError("attribute '" + name + "' is not in the input schema");
    }

    int classify(const Instance& x) const {
        if (x.values.size() != feature_names_.size())
            throw ModelError("instance has " + std::to_string(x.values.size()) +
                             " values, schema has " + std::to_string(feature_names_.size()));
        return adtree_shape_ ? classify_adtree(x) : classify_tree(x);
    }

private:
    bool test_true(const std::string& subject, const Instance& x) const {
        const std::string& name = need(subject, pred::kAttribute)->object;
        double thr = parse_double_or_throw(need(subject, pred::kValue)->object, subject,
                                           pred::kValue);
        return x.values[feature_of(name)] <= thr;
    }

    int classify_tree(const Instance& x) const {
        std::string subject = root_subject_;
        for (std::size_t steps = 0; steps <= props_.size(); ++steps) {
            if (const Triple* decision = find(subject, pred::kDecision))
                return decision->object == "1" ? 1 : 0;
            const char* branch = test_true(subject, x) ? pred::kTrueChild : pred::kFalseChild;
            const std::string& next = need(subject, branch)->object;
            if (!subject_seen_.count(next))
                throw GraphError("subject '" + subject + "': child '" + next +
                                 "' does not resolve to any subject");
            subject = next;
        }
        throw GraphError("tree walk did not terminate (cycle)");
    }

    int classify_adtree(const Instance& x) const {
        double score = parse_double_or_throw(need(root_subject_, pred::kRootPrediction)->object,
                                             root_subject_, pred::kRootPrediction);
        std::unordered_map<std::string, bool> reached;
        reached[root_subject_] = true;
        for (const auto& [number, subject] : units_) {
            const std::string& parent = need(subject, pred::kParent)->object;
            if (!reached.count(parent)) {
                if (parent != root_subject_ && !subject_seen_.count(parent.substr(0, parent.rfind('/'))))
                    throw GraphError("subject '" + subject + "': parent '" + parent +
                                     "' does not resolve");
                continue;
            }
            if (test_true(subject, x)) {
                score += parse_double_or_throw(need(subject, pred::kPredTrue)->object, subject,
                                               pred::kPredTrue);
                reached[subject + "/true"] = true;
            } else {
                score += parse_double_or_throw(need(subject, pred::kPredFalse)->object, subject,
                                               pred::kPredFalse);
                reached[subject + "/false"] = true;
            }
        }
        return score > 0.0 ? 1 : 0;
    }

    OntologyGraph graph_;  // declared first: the indexes below point into it
    std::vector<std::string> feature_names_;
    std::unordered_map<PropertyKey, const Triple*, PropertyKeyHash> props_;
    std::unordered_map<std::string, bool> subject_seen_;
    std::vector<std::string> subject_order_;
    std::vector<std::pair<int, std::string>> units_;
    std::string root_subject_;
    bool adtree_shape_ = false;
};

GraphClassifier::GraphClassifier(const OntologyGraph& g,
                                 const std::vector<std::string>& feature_names)
    : impl_(std::make_unique<Impl>(g, feature_names)) {}

GraphClassifier::~GraphClassifier() = default;
GraphClassifier::GraphClassifier(GraphClassifier&&) noexcept = default;
GraphClassifier& GraphClassifier::operator=(GraphClassifier&&) noexcept = default;

int GraphClassifier::classify(const Instance& x) const { return impl_->classify(x); }

int query_classify(const OntologyGraph& g, const Instance& x,
                   const std::vector<std::string>& feature_names) {
    return GraphClassifier(g, feature_names).classify(x);
}

int vote(std::span<const int> labels) {
    if (labels.size() != 3)
        throw ModelError("vote needs exactly 3 labels, got " + std::to_string(labels.size()));
    int ones = 0;
    for (int label : labels) {
        if (label != 0 && label != 1)
            throw ModelError("vote labels must be 0 or 1, got " + std::to_string(label));
        ones += label;
    }
    return ones >= 2 ? 1 : 0;
}

VotedResult classify_email(const EnsembleBundle& bundle, const Instance& x) {
    VotedResult result;
    result.model_labels[0] = query_classify(bundle.j48, x, bundle.feature_names);
    result.model_labels[1] = query_classify(bundle.adtree, x, bundle.feature_names);
    result.model_labels[2] = query_classify(bundle.ladtree, x, bundle.feature_names);
    result.final_label = vote(result.model_labels);
    return result;
}

std::string classify_batch_csv(const EnsembleBundle& bundle,
                               const std::vector<Instance>& instances) {
    GraphClassifier j48(bundle.j48, bundle.feature_names);
    GraphClassifier adtree(bundle.adtree, bundle.feature_names);
    GraphClassifier ladtree(bundle.ladtree, bundle.feature_names);

    std::ostringstream out;
    out << "index,j48,adtree,ladtree,final\n";
    for (std::size_t i = 0; i < instances.size(); ++i) {
        int a = j48.classify(instances[i]);
        int b = adtree.classify(instances[i]);
        int c = ladtree.classify(instances[i]);
        out << i << ',' << a << ',' << b << ',' << c << ','
            << vote(std::array<int, 3>{a, b, c}) << '\n';
    }
    return out.str();
}

}  // namespace spamtree
