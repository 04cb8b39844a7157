#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spamtree {

// One RDF statement. Objects are either literals or resource IRIs; the flag
// keeps e.g. the literal string "http://x" distinct from the resource.
struct Triple {
    std::string subject;    // absolute IRI
    std::string predicate;  // absolute IRI
    std::string object;
    bool object_is_resource = false;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Namespaces every graph in this toolkit uses.
inline const char kRdfNamespace[] = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const char kRelationNamespace[] = "http://relation/";
inline const char kRelationPrefix[] = "eeg";

// An ordered set of triples; insertion keeps document order, duplicates are
// rejected. Equality is set equality (order-insensitive).
class OntologyGraph {
public:
    // Appends t; throws GraphError if the identical triple is present.
    void add(Triple t);

    const std::vector<Triple>& triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }
    bool contains(const Triple& t) const;

    bool operator==(const OntologyGraph& other) const;

private:
    std::vector<Triple> triples_;
};

// RDF/XML in the plain Description/about style:
//   <rdf:RDF xmlns:rdf="..." xmlns:eeg="http://relation/">
//     <rdf:Description rdf:about="http://DecisionTree/Test1">
//       <eeg:isElementOf rdf:resource=".../Test1/output"/>
//       <eeg:value>0.43</eeg:value>
//     </rdf:Description>
//   </rdf:RDF>
// Triples are grouped by subject in first-appearance order. Every predicate
// lives in the relation namespace, written with the eeg: prefix.
std::string serialize_rdfxml(const OntologyGraph& g);

// Accepts exactly the subset serialize_rdfxml emits (plus an optional XML
// declaration, comments, and flexible whitespace). Property elements carry
// either an rdf:resource attribute or literal text. Throws ParseError with a
// line number on malformed XML, unknown prefixes, or misplaced elements.
OntologyGraph parse_rdfxml(std::istream& in);
OntologyGraph parse_rdfxml(const std::string& text);
OntologyGraph parse_rdfxml_file(const std::string& path);

}  // namespace spamtree
