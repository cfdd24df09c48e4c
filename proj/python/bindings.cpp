#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>

#include "prs/analytics.hpp"
#include "prs/bench.hpp"
#include "prs/codec.hpp"
#include "prs/error.hpp"
#include "prs/report_json.hpp"
#include "prs/retrieval.hpp"
#include "prs/sim.hpp"

namespace py = pybind11;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

prs::FieldPtr field_for(unsigned m, std::optional<std::uint32_t> poly) {
  return poly ? prs::make_field(m, *poly) : prs::make_field(m);
}

std::vector<std::uint8_t> as_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return {reinterpret_cast<const char*>(v.data()), v.size()};
}

prs::Symbol element(const prs::Field& f, std::uint32_t a) {
  if (a > f.n()) throw prs::Error(prs::ErrorCode::OutOfRange, "not an element of the field");
  return static_cast<prs::Symbol>(a);
}

prs::DecoderKind decoder_named(const std::string& name) {
  if (name == "ird") return prs::DecoderKind::Incremental;
  if (name == "restart") return prs::DecoderKind::Restart;
  throw prs::Error(prs::ErrorCode::InvalidArgument, "decoder must be 'ird' or 'restart'");
}

}  // namespace

PYBIND11_MODULE(_prs, m) {
  m.doc() = "Progressive Reed-Solomon retrieval for Byzantine-tolerant storage";

  // PrsError(message) with a `code` attribute naming the ErrorCode.
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::exception<prs::Error>(m, "PrsError", PyExc_ValueError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const prs::Error& e) {
      const py::object& type = error_type.get_stored();
      py::object exc = type(e.what());
      exc.attr("code") = std::string(prs::to_string(e.code()));
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  py::class_<prs::Field, std::shared_ptr<prs::Field>>(m, "Field")
      .def(py::init<unsigned, std::uint32_t>(), py::arg("m"), py::arg("prim_poly"))
      .def_static("default_poly", &prs::Field::default_poly)
      .def_property_readonly("m", &prs::Field::m)
      .def_property_readonly("n", &prs::Field::n)
      .def_property_readonly("prim_poly", &prs::Field::prim_poly)
      .def_property_readonly("alpha", &prs::Field::alpha)
      .def("add", [](const prs::Field& f, std::uint32_t a, std::uint32_t b) {
        return prs::Field::add(element(f, a), element(f, b));
      })
      .def("mul", [](const prs::Field& f, std::uint32_t a, std::uint32_t b) {
        return f.mul(element(f, a), element(f, b));
      })
      .def("div", [](const prs::Field& f, std::uint32_t a, std::uint32_t b) {
        return f.div(element(f, a), element(f, b));
      })
      .def("inv", [](const prs::Field& f, std::uint32_t a) { return f.inv(element(f, a)); })
      .def("pow", [](const prs::Field& f, std::uint32_t a, std::int64_t e) {
        return f.pow(element(f, a), e);
      })
      .def("exp", &prs::Field::exp)
      .def("log", [](const prs::Field& f, std::uint32_t a) {
        if (element(f, a) == 0) throw prs::Error(prs::ErrorCode::DivisionByZero, "log of zero");
        return f.log(static_cast<prs::Symbol>(a));
      });

  m.def("crc32", [](const py::bytes& data) { return prs::crc32(as_bytes(data)); });

  m.def(
      "encode",
      [](const py::bytes& data, unsigned width, std::uint32_t k_hat,
         std::optional<std::uint32_t> prim_poly) {
        const auto bytes = as_bytes(data);
        const auto params = prs::CodeParams::make(field_for(width, prim_poly), k_hat, bytes.size());
        std::map<std::uint32_t, py::bytes> out;
        for (const auto& s : prs::encode_payload(bytes, params)) {
          out.emplace(s.position, to_bytes(prs::serialize_shard(s)));
        }
        return out;
      },
      py::arg("data"), py::arg("m"), py::arg("k_hat"), py::arg("prim_poly") = py::none(),
      "Encode a payload; returns {position: serialized shard}.");

  m.def(
      "parse_shard",
      [](const py::bytes& blob) {
        const auto s = prs::parse_shard(as_bytes(blob));
        py::dict d;
        d["position"] = s.position;
        d["m"] = s.m;
        d["n"] = s.n;
        d["k_hat"] = s.k_hat;
        d["group_count"] = s.group_count;
        d["payload_byte_len"] = s.payload_byte_len;
        d["symbols"] = s.symbols;
        return d;
      },
      py::arg("blob"));

  m.def(
      "retrieve",
      [](const std::map<std::uint32_t, py::bytes>& shards, std::uint64_t seed,
         const std::string& decoder, std::optional<std::uint32_t> prim_poly) {
        if (shards.empty()) throw prs::Error(prs::ErrorCode::InvalidArgument, "no shards");
        std::map<std::uint32_t, prs::Shard> parsed;
        for (const auto& [pos, blob] : shards) parsed.emplace(pos, prs::parse_shard(as_bytes(blob)));
        const prs::Shard& ref = parsed.begin()->second;
        const auto params = prs::CodeParams::make(field_for(ref.m, prim_poly), ref.k_hat,
                                                  ref.payload_byte_len);
        std::vector<std::uint32_t> live;
        for (const auto& [pos, s] : parsed) {
          if (s.position != pos || s.n != params.n || s.group_count != params.group_count) {
            throw prs::Error(prs::ErrorCode::Format, "shard set is inconsistent");
          }
          live.push_back(pos);
        }
        prs::FetchFn fetch = [&](std::uint32_t pos) -> std::optional<std::vector<prs::Symbol>> {
          return parsed.at(pos).symbols;
        };
        prs::RetrieveOptions opts;
        opts.decoder = decoder_named(decoder);
        prs::RetrievalReport rep;
        {
          py::gil_scoped_release release;
          rep = prs::progressive_retrieve(fetch, live, params, seed, opts);
        }
        py::dict d = to_python(prs::to_json(rep));
        d["payload"] = to_bytes(rep.payload);
        return d;
      },
      py::arg("shards"), py::arg("seed"), py::arg("decoder") = "ird",
      py::arg("prim_poly") = py::none(),
      "Progressively retrieve from {position: serialized shard}; missing keys are crashed nodes.");

  m.def("pr_Av", &prs::pr_Av, py::arg("n"), py::arg("v"), py::arg("p"));
  m.def("pr_Bi_given_Av", &prs::pr_Bi_given_Av, py::arg("n"), py::arg("k_hat"), py::arg("i"),
        py::arg("v"));
  m.def("avg_accesses", &prs::avg_accesses, py::arg("n"), py::arg("k_hat"), py::arg("p"));
  m.def("pr_success", &prs::pr_success, py::arg("n"), py::arg("k_hat"), py::arg("p"));
  m.def(
      "analyze",
      [](std::uint32_t n, std::uint32_t k_hat, double p, std::uint32_t s) {
        return to_python(prs::to_json(prs::analyze(n, k_hat, p, s)));
      },
      py::arg("n"), py::arg("k_hat"), py::arg("p"), py::arg("s") = 0);

  m.def(
      "simulate",
      [](unsigned width, std::uint32_t k_hat, double p, std::size_t trials, std::uint64_t seed,
         std::vector<std::uint32_t> crash_set, const std::string& decoder) {
        prs::TrialConfig cfg;
        cfg.field = prs::make_field(width);
        cfg.k_hat = k_hat;
        cfg.decoder = decoder_named(decoder);
        prs::FailureModel model;
        model.p_byz = p;
        model.master_seed = seed;
        model.crash_set = std::move(crash_set);
        prs::MonteCarloSummary s;
        {
          py::gil_scoped_release release;
          s = prs::run_monte_carlo(cfg, model, trials);
        }
        return to_python(prs::to_json(s));
      },
      py::arg("m"), py::arg("k_hat"), py::arg("p"), py::arg("trials"), py::arg("seed") = 0,
      py::arg("crash_set") = std::vector<std::uint32_t>{}, py::arg("decoder") = "ird");

  m.def(
      "bench",
      [](unsigned width, std::uint32_t k_hat, double p, std::size_t trials, std::uint64_t seed,
         const std::vector<std::string>& algorithms) {
        prs::BenchConfig cfg;
        cfg.field = prs::make_field(width);
        cfg.k_hat = k_hat;
        cfg.p = p;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.algorithms.clear();
        for (const auto& a : algorithms) cfg.algorithms.push_back(prs::parse_algorithm(a));
        std::vector<prs::BenchRow> rows;
        {
          py::gil_scoped_release release;
          rows = prs::run_bench(cfg);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["algorithm"] = std::string(prs::to_string(r.algorithm));
          d["trials"] = r.trials;
          d["successes"] = r.successes;
          d["mean_accesses"] = r.mean_accesses;
          d["mean_total_us"] = r.mean_total_us;
          d["median_total_us"] = r.median_total_us;
          d["elp_time_us"] = r.mean_elp_us;
          d["chien_time_us"] = r.mean_chien_us;
          d["inv_mat_time_us"] = r.mean_inv_mat_us;
          d["crc_time_us"] = r.mean_crc_us;
          out.append(d);
        }
        return out;
      },
      py::arg("m"), py::arg("k_hat"), py::arg("p"), py::arg("trials") = 10, py::arg("seed") = 0,
      py::arg("algorithms") = std::vector<std::string>{"ird", "restart", "genie"});
}
