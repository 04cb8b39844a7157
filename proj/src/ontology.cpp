#include "spamtree/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "spamtree/numformat.hpp"

#include "json.hpp"

namespace spamtree {

namespace {

std::string test_subject(int number) {
    return std::string(kTreeSubjectBase) + "Test" + std::to_string(number);
}

std::optional<double> parse_double_full(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// "(824.0/29.0)" or "(8.0)" -> (covered, errors)
std::optional<std::pair<double, double>> parse_counts(const std::string& s) {
    if (s.size() < 3 || s.front() != '(' || s.back() != ')') return std::nullopt;
    std::string body = s.substr(1, s.size() - 2);
    std::size_t slash = body.find('/');
    std::string covered = slash == std::string::npos ? body : body.substr(0, slash);
    std::string errors = slash == std::string::npos ? "0" : body.substr(slash + 1);
    auto c = parse_double_full(covered), e = parse_double_full(errors);
    if (!c || !e) return std::nullopt;
    return std::make_pair(*c, *e);
}

// Per-subject view of a graph, subjects kept in first-appearance order.
struct SubjectIndex {
    std::vector<std::string> order;
    std::map<std::string, std::map<std::string, std::vector<const Triple*>>> by_subject;
    std::vector<std::string> foreign;  // predicates outside the relation namespace

    explicit SubjectIndex(const OntologyGraph& g) {
        const std::string ns = kRelationNamespace;
        for (const Triple& t : g.triples()) {
            auto [it, fresh] = by_subject.try_emplace(t.subject);
            if (fresh) order.push_back(t.subject);
            if (t.predicate.rfind(ns, 0) != 0) {
                foreign.push_back("predicate '" + t.predicate + "' on subject '" + t.subject +
                                  "' is outside the relation namespace");
                continue;
            }
            it->second[t.predicate.substr(ns.size())].push_back(&t);
        }
    }

    const std::map<std::string, std::vector<const Triple*>>& preds(const std::string& s) const {
        return by_subject.at(s);
    }
    bool has(const std::string& subject) const { return by_subject.count(subject) != 0; }
};

const char* const kTestPreds[] = {pred::kAttribute, pred::kOperator, pred::kValue,
                                  pred::kIsElementOf};
const char* const kOutputPreds[] = {pred::kDecision, pred::kInfo};

bool has_any(const std::map<std::string, std::vector<const Triple*>>& preds,
             std::initializer_list<const char*> names) {
    for (const char* n : names)
        if (preds.count(n)) return true;
    return false;
}

struct Checker {
    const SubjectIndex& index;
    std::vector<std::string>& violations;

    void note(const std::string& msg) { violations.push_back(msg); }

    // exactly one triple for `name`; returns it or null (after noting)
    const Triple* single(const std::string& subject, const char* name) {
        const auto& preds = index.preds(subject);
        auto it = preds.find(name);
        if (it == preds.end()) {
            note("subject '" + subject + "' is missing " + name);
            return nullptr;
        }
        if (it->second.size() != 1) {
            note("subject '" + subject + "' has " + std::to_string(it->second.size()) + " " +
                 name + " triples, expected one");
            return nullptr;
        }
        return it->second[0];
    }

    const Triple* literal(const std::string& subject, const char* name) {
        const Triple* t = single(subject, name);
        if (t && t->object_is_resource) {
            note("subject '" + subject + "': " + name + " must be a literal");
            return nullptr;
        }
        return t;
    }

    const Triple* resource(const std::string& subject, const char* name) {
        const Triple* t = single(subject, name);
        if (t && !t->object_is_resource) {
            note("subject '" + subject + "': " + name + " must be a resource");
            return nullptr;
        }
        return t;
    }

    void numeric_literal(const std::string& subject, const char* name) {
        if (const Triple* t = literal(subject, name))
            if (!parse_double_full(t->object))
                note("subject '" + subject + "': " + name + " value '" + t->object +
                     "' is not numeric");
    }

    void check_test_schema(const std::string& subject) {
        if (const Triple* t = literal(subject, pred::kAttribute))
            if (t->object.empty()) note("subject '" + subject + "' has an empty attribute name");
        if (const Triple* t = literal(subject, pred::kOperator))
            if (t->object != "<=")
                note("subject '" + subject + "': operator must be '<=', got '" + t->object +
                     "'");
        numeric_literal(subject, pred::kValue);
        resource(subject, pred::kIsElementOf);
    }

    void check_allowed(const std::string& subject, std::initializer_list<const char*> allowed) {
        for (const auto& [name, triples] : index.preds(subject)) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || name == a;
            if (!ok) note("unexpected predicate '" + name + "' on subject '" + subject + "'");
        }
    }
};

void validate_tree_shape(const SubjectIndex& index, std::vector<std::string>& violations) {
    Checker check{index, violations};
    std::vector<std::string> tests, outputs;
    for (const std::string& subject : index.order) {
        const auto& preds = index.preds(subject);
        bool is_test = has_any(preds, {pred::kAttribute, pred::kOperator, pred::kValue,
                                       pred::kIsElementOf, pred::kTrueChild, pred::kFalseChild});
        bool is_output = has_any(preds, {pred::kDecision, pred::kInfo});
        if (is_test && is_output) {
            check.note("subject '" + subject + "' mixes test and output predicates");
            continue;
        }
        if (is_test) tests.push_back(subject);
        else if (is_output) outputs.push_back(subject);
        else check.note("subject '" + subject + "' has no recognized predicates");
    }

    std::map<std::string, int> referenced;
    for (const std::string& subject : tests) {
        check.check_allowed(subject, {pred::kAttribute, pred::kOperator, pred::kValue,
                                      pred::kIsElementOf, pred::kTrueChild, pred::kFalseChild});
        check.check_test_schema(subject);
        for (const char* childp : {pred::kTrueChild, pred::kFalseChild}) {
            if (const Triple* t = check.resource(subject, childp)) {
                if (!index.has(t->object))
                    check.note("subject '" + subject + "': " + childp + " '" + t->object +
                               "' does not resolve to any subject");
                else
                    referenced[t->object]++;
            }
        }
    }
    for (const std::string& subject : outputs) {
        check.check_allowed(subject, {pred::kDecision, pred::kInfo});
        if (const Triple* t = check.literal(subject, pred::kDecision))
            if (t->object != "0" && t->object != "1")
                check.note("subject '" + subject + "': decision must be 0 or 1, got '" +
                           t->object + "'");
        const auto& preds = index.preds(subject);
        auto it = preds.find(pred::kInfo);
        if (it != preds.end()) {
            if (it->second.size() != 1)
                check.note("subject '" + subject + "' has multiple info triples");
            else if (it->second[0]->object_is_resource)
                check.note("subject '" + subject + "': info must be a literal");
            else if (!parse_counts(it->second[0]->object))
                check.note("subject '" + subject + "': info '" + it->second[0]->object +
                           "' is not in (covered/errors) form");
        }
    }

    if (!tests.empty() || outputs.size() > 1) {
        std::vector<std::string> roots;
        for (const std::string& s : tests)
            if (!referenced.count(s)) roots.push_back(s);
        for (const std::string& s : outputs)
            if (!referenced.count(s)) roots.push_back(s);
        if (roots.size() != 1) {
            check.note("graph must have exactly one root node, found " +
                       std::to_string(roots.size()));
            return;
        }
        if (!tests.empty() && index.preds(roots[0]).count(pred::kDecision))
            check.note("root '" + roots[0] + "' is an output subject but tests exist");
        for (const auto& [subject, count] : referenced)
            if (count > 1)
                check.note("subject '" + subject + "' is referenced as a child " +
                           std::to_string(count) + " times");

        // walk child links from the root; anything missed sits on a cycle or
        // in a disconnected component
        std::set<std::string> seen{roots[0]};
        std::deque<std::string> queue{roots[0]};
        while (!queue.empty()) {
            std::string subject = queue.front();
            queue.pop_front();
            const auto& preds = index.preds(subject);
            for (const char* childp : {pred::kTrueChild, pred::kFalseChild}) {
                auto it = preds.find(childp);
                if (it == preds.end()) continue;
                for (const Triple* t : it->second)
                    if (t->object_is_resource && index.has(t->object) &&
                        seen.insert(t->object).second)
                        queue.push_back(t->object);
            }
        }
        for (const std::string& s : tests)
            if (!seen.count(s))
                check.note("subject '" + s + "' is unreachable from the root (cycle or orphan)");
        for (const std::string& s : outputs)
            if (!seen.count(s))
                check.note("subject '" + s + "' is unreachable from the root (cycle or orphan)");
    }
}

// Test subjects of an alternating-tree graph in unit order with parsed
// numbers; the shared IRI prefix before "Test<u>" ties parents to units.
struct AdUnits {
    std::vector<std::pair<int, std::string>> units;  // (number, subject), sorted
    std::string prefix;
};

std::optional<int> trailing_test_number(const std::string& subject, std::string& prefix) {
    std::size_t pos = subject.rfind("Test");
    if (pos == std::string::npos) return std::nullopt;
    std::string digits = subject.substr(pos + 4);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
    prefix = subject.substr(0, pos);
    return std::stoi(digits);
}

void validate_adtree_shape(const SubjectIndex& index, std::vector<std::string>& violations) {
    Checker check{index, violations};
    std::vector<std::string> roots, tests;
    for (const std::string& subject : index.order) {
        if (index.preds(subject).count(pred::kRootPrediction)) roots.push_back(subject);
        else tests.push_back(subject);
    }
    if (roots.size() != 1) {
        check.note("graph must have exactly one rootPrediction subject, found " +
                   std::to_string(roots.size()));
        return;
    }
    check.check_allowed(roots[0], {pred::kRootPrediction});
    check.numeric_literal(roots[0], pred::kRootPrediction);

    AdUnits parsed;
    bool numbering_ok = true;
    for (const std::string& subject : tests) {
        check.check_allowed(subject, {pred::kAttribute, pred::kOperator, pred::kValue,
                                      pred::kIsElementOf, pred::kPredTrue, pred::kPredFalse,
                                      pred::kParent});
        check.check_test_schema(subject);
        check.numeric_literal(subject, pred::kPredTrue);
        check.numeric_literal(subject, pred::kPredFalse);

        std::string prefix;
        auto number = trailing_test_number(subject, prefix);
        if (!number || *number < 1) {
            check.note("subject '" + subject + "' is not of the form <prefix>Test<n>");
            numbering_ok = false;
            continue;
        }
        if (parsed.units.empty()) parsed.prefix = prefix;
        else if (prefix != parsed.prefix) {
            check.note("subject '" + subject + "' does not share the graph's Test IRI prefix");
            numbering_ok = false;
        }
        parsed.units.emplace_back(*number, subject);
    }
    if (!numbering_ok) return;
    std::sort(parsed.units.begin(), parsed.units.end());
    for (std::size_t k = 0; k < parsed.units.size(); ++k)
        if (parsed.units[k].first != static_cast<int>(k) + 1) {
            check.note("unit numbering must be contiguous from 1; found Test" +
                       std::to_string(parsed.units[k].first) + " at position " +
                       std::to_string(k + 1));
            return;
        }

    for (const auto& [number, subject] : parsed.units) {
        const Triple* t = check.resource(subject, pred::kParent);
        if (!t) continue;
        const std::string& target = t->object;
        if (target == roots[0]) continue;
        bool ok = false;
        for (const char* suffix : {"/true", "/false"}) {
            std::string tail = suffix;
            if (target.size() > tail.size() &&
                target.compare(target.size() - tail.size(), tail.size(), tail) == 0) {
                std::string head = target.substr(0, target.size() - tail.size());
                std::string prefix;
                auto parent_num = trailing_test_number(head, prefix);
                if (parent_num && prefix == parsed.prefix && *parent_num >= 1 &&
                    *parent_num < number) {
                    ok = true;
                } else if (parent_num && *parent_num >= number) {
                    check.note("subject '" + subject + "': parent '" + target +
                               "' must reference an earlier unit");
                    ok = true;  // reported; skip the generic message
                }
            }
        }
        if (!ok)
            check.note("subject '" + subject + "': parent '" + target +
                       "' is neither the root nor a branch of an earlier unit");
    }
}

}  // namespace

ValidationReport validate(const OntologyGraph& g) {
    ValidationReport report;
    report.rows = g.triples();

    SubjectIndex index(g);
    report.violations = index.foreign;
    if (index.foreign.empty() && !g.triples().empty()) {
        bool adtree_shape = false;
        for (const Triple& t : g.triples())
            if (t.predicate == std::string(kRelationNamespace) + pred::kRootPrediction)
                adtree_shape = true;
        if (adtree_shape)
            validate_adtree_shape(index, report.violations);
        else
            validate_tree_shape(index, report.violations);
    }
    report.ok = report.violations.empty();
    return report;
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    if (ok)
        out << "Your RDF document validated successfully.\n";
    else {
        out << "Your RDF document failed validation.\n\nProblems found\n";
        for (std::size_t i = 0; i < violations.size(); ++i)
            out << (i + 1) << ". " << violations[i] << '\n';
    }
    out << "\nTriples of the Data Model\n";
    out << "Number\tSubject\tPredicate\tObject\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        out << (i + 1) << '\t' << rows[i].subject << '\t' << rows[i].predicate << '\t'
            << rows[i].object << '\n';
    return out.str();
}

std::string ValidationReport::to_json() const {
    nlohmann::json j;
    j["ok"] = ok;
    j["violations"] = violations;
    j["triples"] = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i)
        j["triples"].push_back({{"number", i + 1},
                                {"subject", rows[i].subject},
                                {"predicate", rows[i].predicate},
                                {"object", rows[i].object},
                                {"resource", rows[i].object_is_resource}});
    return j.dump(2);
}

OntologyGraph tree_to_graph(const DecisionTree& tree) {
    if (tree.root < 0 || tree.nodes.empty()) throw ModelError("empty tree");
    const std::string rel = kRelationNamespace;

    // breadth-first numbering from 1
    std::vector<int> number(tree.nodes.size(), 0);
    std::vector<int> bfs{tree.root};
    for (std::size_t q = 0; q < bfs.size(); ++q) {
        int id = bfs[q];
        number[id] = static_cast<int>(q) + 1;
        if (!tree.nodes[id].leaf) {
            bfs.push_back(tree.nodes[id].left);
            bfs.push_back(tree.nodes[id].right);
        }
    }
    auto subject_of = [&](int id) {
        std::string s = test_subject(number[id]);
        return tree.nodes[id].leaf ? s + "/output" : s;
    };

    OntologyGraph g;
    for (int id : bfs) {
        const TreeNode& node = tree.nodes[id];
        std::string subject = subject_of(id);
        if (node.leaf) {
            g.add({subject, rel + pred::kDecision, std::to_string(node.label), false});
            g.add({subject, rel + pred::kInfo, format_counts(node.covered, node.errors), false});
        } else {
            g.add({subject, rel + pred::kIsElementOf, subject + "/output", true});
            g.add({subject, rel + pred::kValue, shortest_decimal(node.threshold), false});
            g.add({subject, rel + pred::kOperator, "<=", false});
            g.add({subject, rel + pred::kAttribute, tree.attribute_names[node.attribute],
                   false});
            g.add({subject, rel + pred::kTrueChild, subject_of(node.left), true});
            g.add({subject, rel + pred::kFalseChild, subject_of(node.right), true});
        }
    }
    return g;
}

namespace {

int attribute_index(const std::string& name, const std::vector<std::string>& feature_names) {
    for (std::size_t i = 0; i < feature_names.size(); ++i)
        if (feature_names[i] == name) return static_cast<int>(i);
    throw ModelError("attribute '" + name + "' is not in the schema");
}

const Triple* only(const SubjectIndex& index, const std::string& subject, const char* name) {
    return index.preds(subject).at(name).at(0);
}

}  // namespace

DecisionTree graph_to_tree(const OntologyGraph& g,
                           const std::vector<std::string>& feature_names) {
    ValidationReport report = validate(g);
    if (!report.ok) throw GraphError(report.violations.front());
    if (g.triples().empty()) throw GraphError("empty graph");

    SubjectIndex index(g);
    for (const Triple& t : g.triples())
        if (t.predicate == std::string(kRelationNamespace) + pred::kRootPrediction)
            throw GraphError("graph is an alternating tree, not a decision tree");

    // find the root: the one subject never referenced as a child
    std::set<std::string> referenced;
    for (const Triple& t : g.triples()) {
        std::string local = t.predicate.substr(std::string(kRelationNamespace).size());
        if (local == pred::kTrueChild || local == pred::kFalseChild) referenced.insert(t.object);
    }
    std::string root_subject;
    for (const std::string& subject : index.order)
        if (!referenced.count(subject)) root_subject = subject;

    DecisionTree tree;
    tree.attribute_names = feature_names;

    // recursive rebuild; ids are assigned in depth-first order
    auto build = [&](auto&& self, const std::string& subject) -> int {
        const auto& preds = index.preds(subject);
        if (preds.count(pred::kDecision)) {
            TreeNode leaf;
            leaf.leaf = true;
            leaf.label = only(index, subject, pred::kDecision)->object == "1" ? 1 : 0;
            if (preds.count(pred::kInfo)) {
                auto counts = parse_counts(only(index, subject, pred::kInfo)->object);
                leaf.covered = counts->first;
                leaf.errors = counts->second;
            }
            tree.nodes.push_back(leaf);
            return static_cast<int>(tree.nodes.size()) - 1;
        }
        TreeNode node;
        node.attribute =
            attribute_index(only(index, subject, pred::kAttribute)->object, feature_names);
        node.threshold = *parse_double_full(only(index, subject, pred::kValue)->object);
        int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(node);
        int left = self(self, only(index, subject, pred::kTrueChild)->object);
        int right = self(self, only(index, subject, pred::kFalseChild)->object);
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
    };
    tree.root = build(build, root_subject);
    return tree;
}

OntologyGraph adtree_to_graph(const ADTreeModel& model) {
    const std::string rel = kRelationNamespace;
    const std::string root_subject = std::string(kTreeSubjectBase) + "Root";

    OntologyGraph g;
    g.add({root_subject, rel + pred::kRootPrediction, shortest_decimal(model.root_prediction),
           false});
    for (std::size_t j = 0; j < model.units.size(); ++j) {
        const SplitterUnit& u = model.units[j];
        std::string subject = test_subject(static_cast<int>(j) + 1);
        std::string parent;
        if (u.parent_node == 0)
            parent = root_subject;
        else {
            int parent_unit = (u.parent_node - 1) / 2;  // 2j+1 / 2j+2 -> j
            parent = test_subject(parent_unit + 1) +
                     (u.parent_node % 2 == 1 ? "/true" : "/false");
        }
        g.add({subject, rel + pred::kIsElementOf, subject + "/output", true});
        g.add({subject, rel + pred::kValue, shortest_decimal(u.threshold), false});
        g.add({subject, rel + pred::kOperator, "<=", false});
        g.add({subject, rel + pred::kAttribute, model.attribute_names[u.attribute], false});
        g.add({subject, rel + pred::kPredTrue, shortest_decimal(u.pred_true), false});
        g.add({subject, rel + pred::kPredFalse, shortest_decimal(u.pred_false), false});
        g.add({subject, rel + pred::kParent, parent, true});
    }
    return g;
}

ADTreeModel graph_to_adtree(const OntologyGraph& g,
                            const std::vector<std::string>& feature_names) {
    ValidationReport report = validate(g);
    if (!report.ok) throw GraphError(report.violations.front());
    if (g.triples().empty()) throw GraphError("empty graph");

    bool adtree_shape = false;
    for (const Triple& t : g.triples())
        if (t.predicate == std::string(kRelationNamespace) + pred::kRootPrediction)
            adtree_shape = true;
    if (!adtree_shape) throw GraphError("graph is a decision tree, not an alternating tree");

    SubjectIndex index(g);
    std::string root_subject;
    std::vector<std::pair<int, std::string>> units;
    for (const std::string& subject : index.order) {
        if (index.preds(subject).count(pred::kRootPrediction)) {
            root_subject = subject;
        } else {
            std::string prefix;
            units.emplace_back(*trailing_test_number(subject, prefix), subject);
        }
    }
    std::sort(units.begin(), units.end());

    ADTreeModel model;
    model.attribute_names = feature_names;
    model.root_prediction =
        *parse_double_full(only(index, root_subject, pred::kRootPrediction)->object);
    for (const auto& [number, subject] : units) {
        SplitterUnit u;
        u.attribute = attribute_index(only(index, subject, pred::kAttribute)->object,
                                      feature_names);
        u.threshold = *parse_double_full(only(index, subject, pred::kValue)->object);
        u.pred_true = *parse_double_full(only(index, subject, pred::kPredTrue)->object);
        u.pred_false = *parse_double_full(only(index, subject, pred::kPredFalse)->object);
        const std::string& parent = only(index, subject, pred::kParent)->object;
        if (parent == root_subject) {
            u.parent_node = 0;
        } else {
            bool is_true = parent.size() > 5 && parent.ends_with("/true");
            std::string head = parent.substr(0, parent.size() - (is_true ? 5 : 6));
            std::string prefix;
            int parent_unit = *trailing_test_number(head, prefix) - 1;
            u.parent_node = 2 * parent_unit + (is_true ? 1 : 2);
        }
        model.units.push_back(u);
    }
    return model;
}

}  // namespace spamtree
