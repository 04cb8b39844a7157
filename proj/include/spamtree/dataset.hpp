#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spamtree {

// Raised by the corpus and RDF/XML readers; line is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Bad inputs to a learner or classifier (empty dataset, single-class corpus,
// instance that does not match the model's schema, ...).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structural problems in an ontology graph: schema violations, cycles,
// dangling node references.
class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AttributeKind { numeric, nominal };

struct AttributeSpec {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::vector<std::string> labels;  // nominal only
};

// One classified example: numeric feature values in schema order (class
// attribute excluded) plus the class index, 0 = ham, 1 = spam.
struct Instance {
    std::vector<double> values;
    int class_label = 0;
};

struct Dataset {
    std::string relation;
    std::vector<AttributeSpec> schema;  // class attribute last, always nominal
    std::vector<Instance> instances;

    std::size_t feature_count() const { return schema.empty() ? 0 : schema.size() - 1; }

    const AttributeSpec& class_attribute() const { return schema.back(); }

    std::size_t count_of(int label) const {
        std::size_t n = 0;
        for (const auto& inst : instances) n += (inst.class_label == label);
        return n;
    }

    std::vector<std::string> feature_names() const {
        std::vector<std::string> names;
        names.reserve(feature_count());
        for (std::size_t i = 0; i + 1 < schema.size(); ++i) names.push_back(schema[i].name);
        return names;
    }
};

}  // namespace spamtree
