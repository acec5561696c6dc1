#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

#include "kcsim/compressor.hpp"
#include "kcsim/corpus.hpp"
#include "kcsim/distances.hpp"
#include "kcsim/error.hpp"
#include "kcsim/relations.hpp"

namespace py = pybind11;
using namespace kcsim;

namespace {

std::vector<NamedObject> to_objects(
    const std::vector<std::tuple<std::string, std::string, std::string>>& raw) {
  std::vector<NamedObject> out;
  for (const auto& [id, name, group] : raw) out.push_back({id, name, group});
  return out;
}

py::dict matrix_to_dict(const RelationMatrix& m) {
  py::list values, categories;
  for (std::size_t r = 0; r < m.row_count(); ++r) {
    py::list vrow, crow;
    for (std::size_t c = 0; c < m.col_count(); ++c) {
      const auto& cell = m.at(r, c);
      vrow.append(cell.value ? py::cast(*cell.value) : py::none());
      crow.append(cell.category ? py::cast(*cell.category) : py::none());
    }
    values.append(vrow);
    categories.append(crow);
  }
  py::list row_ids, col_ids;
  for (const auto& o : m.rows()) row_ids.append(o.id);
  for (const auto& o : m.cols()) col_ids.append(o.id);
  py::dict d;
  d["rows"] = row_ids;
  d["cols"] = col_ids;
  d["values"] = values;
  d["categories"] = categories;
  d["values_tsv"] = export_matrix(m, ExportFormat::kValues);
  d["categories_tsv"] = export_matrix(m, ExportFormat::kCategories);
  return d;
}

}  // namespace

PYBIND11_MODULE(_kcsim, m) {
  m.doc() = "Compression- and hit-count-based similarity toolkit";

  py::register_exception<Error>(m, "KcsimError", PyExc_ValueError);

  py::class_<BitString>(m, "BitString")
      .def_static("parse", &BitString::parse)
      .def_static("from_bytes", [](const py::bytes& b) {
        const std::string s = b;
        return BitString::from_bytes(
            std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
      })
      .def("__len__", &BitString::length)
      .def("nibbles", &BitString::nibbles)
      .def("to_text", &BitString::to_text)
      .def("__eq__", [](const BitString& a, const BitString& b) { return a == b; })
      .def("__repr__", [](const BitString& b) { return "BitString('" + b.to_text() + "')"; });

  py::class_<KeyDictionary>(m, "KeyDictionary")
      .def(py::init<>())
      .def_static("parse", &KeyDictionary::parse)
      .def("add", &KeyDictionary::add)
      .def("__len__", &KeyDictionary::size)
      .def("entries",
           [](const KeyDictionary& d) {
             std::vector<std::pair<std::string, int>> out;
             for (const auto& e : d.entries()) out.emplace_back(e.symbol, e.nibble);
             return out;
           })
      .def("to_text", &KeyDictionary::to_text);

  py::enum_<KeySharing>(m, "KeySharing")
      .value("BY_VALUE", KeySharing::kByValue)
      .value("BY_SYMBOL", KeySharing::kBySymbol);

  py::class_<CompressedForm>(m, "CompressedForm")
      .def_readonly("symbol_stream", &CompressedForm::symbol_stream)
      .def_readonly("emitted_dictionary", &CompressedForm::emitted_dictionary)
      .def_readonly("compressed_length_bits", &CompressedForm::compressed_length_bits)
      .def_readonly("source_length_bits", &CompressedForm::source_length_bits)
      .def("to_text", &CompressedForm::to_text);

  m.def("compress",
        [](const BitString& w, const std::optional<KeyDictionary>& preset) {
          return preset ? compress(w, *preset) : compress(w);
        },
        py::arg("w"), py::arg("preset") = py::none());
  m.def("compress_conditional", &compress_conditional, py::arg("x"), py::arg("y_keys"),
        py::arg("sharing") = KeySharing::kByValue);
  m.def("compress_declared", &compress_declared);
  m.def("keys_of", &keys_of);
  m.def("decompress", [](const std::vector<std::string>& stream, const KeyDictionary& d) {
    return decompress(stream, d);
  });
  m.def("approx_complexity",
        [](const BitString& w, const std::optional<KeyDictionary>& given,
           KeySharing sharing, double q) {
          return given ? approx_complexity(w, *given, sharing, q).value
                       : approx_complexity(w, q).value;
        },
        py::arg("w"), py::arg("conditional_on") = py::none(),
        py::arg("sharing") = KeySharing::kByValue, py::arg("q_bits") = 0.0);
  m.def("shared_information",
        py::overload_cast<const BitString&, const KeyDictionary&, KeySharing>(
            &shared_information),
        py::arg("x"), py::arg("y_keys"), py::arg("sharing") = KeySharing::kByValue);
  m.def("shared_information",
        py::overload_cast<const BitString&, const BitString&, KeySharing>(
            &shared_information),
        py::arg("x"), py::arg("y"), py::arg("sharing") = KeySharing::kByValue);

  py::class_<HitCounts>(m, "HitCounts")
      .def(py::init([](std::uint64_t fx, std::uint64_t fy, std::uint64_t fxy,
                       std::optional<std::uint64_t> n) { return HitCounts{fx, fy, fxy, n}; }),
           py::arg("f_x"), py::arg("f_y"), py::arg("f_xy"), py::arg("n_total") = py::none())
      .def_readwrite("f_x", &HitCounts::f_x)
      .def_readwrite("f_y", &HitCounts::f_y)
      .def_readwrite("f_xy", &HitCounts::f_xy)
      .def_readwrite("n_total", &HitCounts::n_total)
      .def("__eq__", [](const HitCounts& a, const HitCounts& b) { return a == b; })
      .def("__repr__", [](const HitCounts& h) {
        return "HitCounts(" + std::to_string(h.f_x) + ", " + std::to_string(h.f_y) + ", " +
               std::to_string(h.f_xy) + ", " +
               (h.n_total ? std::to_string(*h.n_total) : "None") + ")";
      });

  m.def("information_distance",
        [](double kx, double ky, double kxy) { return information_distance(kx, ky, kxy).value; });
  m.def("nid", [](double kx, double ky, double kxy) { return nid(kx, ky, kxy).value; });
  m.def("ncd", [](double cx, double cy, double cxy) { return ncd(cx, cy, cxy).value; });
  m.def("nsd", [](const HitCounts& h) { return nsd(h).value; });
  m.def("ngd", [](const HitCounts& h) { return ngd(h).value; });
  m.def("metric_m", [](const HitCounts& h) { return metric_m(h).value; });
  m.def("dice_similarity",
        [](std::uint64_t fx, std::uint64_t fy, std::uint64_t fxy, double c) {
          return dice_similarity(fx, fy, fxy, c).value;
        },
        py::arg("f_x"), py::arg("f_y"), py::arg("f_xy"), py::arg("c") = 0.0);

  m.def("check_similarity_axioms",
        [](const std::vector<std::string>& objects, const PairSimilarity& fn) {
          const AxiomReport r = check_similarity_axioms(objects, fn);
          py::dict d;
          for (const AxiomCheck* c :
               {&r.non_negativity, &r.symmetry, &r.self_maximal, &r.unit_range}) {
            d[py::str(c->name)] = py::make_tuple(c->passed, c->counterexamples);
          }
          d["all_passed"] = r.all_passed();
          d["undefined"] = r.undefined;
          return d;
        });

  py::class_<HitTable>(m, "HitTable")
      .def_static("parse", &HitTable::parse)
      .def_static("load", [](const std::string& path) { return HitTable::load(path); })
      .def("lookup", &HitTable::lookup)
      .def_property_readonly("n_total", &HitTable::n_total)
      .def_property_readonly("warnings", &HitTable::warnings)
      .def("build_matrix",
           [](const HitTable& t,
              const std::vector<std::tuple<std::string, std::string, std::string>>& objects,
              const std::string& kind) {
             const auto objs = to_objects(objects);
             return matrix_to_dict(
                 build_matrix(objs, objs, TableProvider(t), matrix_kind_from_string(kind)));
           });

  py::class_<CorpusIndex>(m, "CorpusIndex")
      .def_static("build",
                  [](const std::vector<std::pair<std::string, std::string>>& docs) {
                    std::vector<RawDocument> raw;
                    for (const auto& [id, text] : docs) raw.push_back({id, text});
                    return CorpusIndex::build(raw);
                  })
      .def_property_readonly("document_count", &CorpusIndex::document_count)
      .def_property_readonly("vocabulary_size", &CorpusIndex::vocabulary_size)
      .def_property_readonly("omega_cardinality", &CorpusIndex::omega_cardinality)
      .def_property_readonly("psi", &CorpusIndex::psi)
      .def("vocabulary", &CorpusIndex::vocabulary)
      .def("singleton_count",
           [](const CorpusIndex& i, const std::string& x) { return i.singleton_count(i.term(x)); })
      .def("doubleton_count",
           [](const CorpusIndex& i, const std::string& x, const std::string& y) {
             return i.doubleton_count(i.term(x), i.term(y));
           })
      .def("probability",
           [](const CorpusIndex& i, const std::string& x, const std::optional<std::string>& y) {
             return y ? i.probability(i.term(x), i.term(*y)) : i.probability(i.term(x));
           },
           py::arg("x"), py::arg("y") = py::none())
      .def("hit_counts",
           [](const CorpusIndex& i, const std::string& x, const std::string& y) {
             return IndexProvider(i).hit_counts(x, y);
           })
      .def("build_matrix",
           [](const CorpusIndex& i,
              const std::vector<std::tuple<std::string, std::string, std::string>>& objects,
              const std::string& kind) {
             const auto objs = to_objects(objects);
             return matrix_to_dict(
                 build_matrix(objs, objs, IndexProvider(i), matrix_kind_from_string(kind)));
           });

  m.def("categorize", [](double v) {
    const auto& c = categorize(v);
    return std::make_pair(c.code, std::string(c.label));
  });
}
