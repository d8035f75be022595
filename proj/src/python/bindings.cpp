#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cellprobe/brackets.hpp"
#include "cellprobe/cli.hpp"
#include "cellprobe/distribution.hpp"
#include "cellprobe/entropy_sum.hpp"
#include "cellprobe/errors.hpp"
#include "cellprobe/infotheory.hpp"
#include "cellprobe/pipeline.hpp"
#include "cellprobe/reference_schemes.hpp"
#include "cellprobe/scheme_io.hpp"
#include "cellprobe/separator.hpp"
#include "cellprobe/stretcher.hpp"

namespace py = pybind11;
using namespace cellprobe;

namespace {

py::object to_py(const BigInt& v) {
    return py::module_::import("builtins").attr("int")(v.get_str());
}

py::object to_py(const Rational& v) {
    return py::module_::import("fractions").attr("Fraction")(to_py(v.get_num()), to_py(v.get_den()));
}

Rational from_fraction(const py::handle& h) {
    py::object f = py::module_::import("fractions").attr("Fraction")(h);
    const std::string num = py::str(f.attr("numerator"));
    const std::string den = py::str(f.attr("denominator"));
    return make_rational(BigInt(num, 10), BigInt(den, 10));
}

// Distribution from {tuple: probability}; probabilities may be Fractions,
// ints or floats (floats are taken at their exact binary value).
Distribution dist_from_dict(const std::vector<std::uint32_t>& alphabets, const py::dict& pmf) {
    std::vector<std::pair<Tuple, Rational>> entries;
    BigInt lcm = 1;
    for (auto [k, v] : pmf) {
        Tuple t;
        if (py::isinstance<py::str>(k)) {
            for (char ch : k.cast<std::string>()) t.push_back(static_cast<std::uint32_t>(ch - '0'));
        } else {
            t = k.cast<Tuple>();
        }
        Rational p = from_fraction(v);
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
        entries.emplace_back(std::move(t), std::move(p));
    }
    if (!lcm.fits_ulong_p()) throw SizeError("probability denominators too large", 0);
    std::vector<std::pair<Tuple, std::uint64_t>> weighted;
    Rational sum = 0;
    for (auto& [t, p] : entries) {
        sum += p;
        const Rational w = p * Rational(lcm);
        weighted.emplace_back(std::move(t), w.get_num().get_ui());
    }
    if (sum != 1) throw DomainError("probabilities must sum to 1");
    return Distribution(alphabets, std::move(weighted));
}

py::dict stage_checks(const PipelineReport& r) {
    py::dict d;
    for (const auto& c : r.checks) {
        d[py::str(c.stage + ": " + c.name)] =
            py::make_tuple(c.holds, c.scale == CheckScale::independent);
    }
    return d;
}

py::dict pipeline_dict(const PipelineReport& r) {
    py::dict d;
    d["kind"] = r.kind;
    d["n"] = r.n;
    d["u"] = r.u;
    d["q"] = r.q;
    d["redundancy"] = r.redundancy;
    d["truncated"] = r.truncated;
    d["truncated_stage"] = r.truncated_stage;
    d["truncated_reason"] = r.truncated_reason;
    d["scale_independent_ok"] = r.scale_independent_ok();
    d["all_checks_hold"] = r.all_checks_hold();
    d["checks"] = stage_checks(r);
    d["s"] = r.s ? py::cast(*r.s) : py::none();
    d["s_prime"] = r.s_prime ? py::cast(*r.s_prime) : py::none();
    if (r.blocks) d["pair"] = py::make_tuple(r.blocks->p, r.blocks->i, r.blocks->j);
    if (r.chain) {
        py::list lines;
        for (const auto& l : r.chain->lines) {
            lines.append(py::make_tuple(l.expression, l.exact ? to_py(*l.exact) : py::cast(l.value),
                                        l.relation, l.holds));
        }
        d["chain"] = lines;
        d["contradiction"] = r.chain->contradiction;
    }
    d["text"] = pipeline_report(r).str(ReportFormat::text);
    return d;
}

SchemeSpecParams params(const std::string& variant, std::size_t n, std::uint32_t m,
                        std::size_t block, std::size_t superblock) {
    SchemeSpecParams p;
    p.variant = parse_variant(variant);
    p.n = n;
    p.cell_alphabet = m;
    p.block = block;
    p.superblock = superblock;
    return p;
}

}  // namespace

PYBIND11_MODULE(_cellprobe, mod) {
    mod.doc() = "Non-adaptive cell-probe schemes and their restriction analysis";

    auto base = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(mod, "DomainError", base.ptr());
    py::register_exception<RangeError>(mod, "RangeError", base.ptr());
    py::register_exception<ParameterError>(mod, "ParameterError", base.ptr());
    py::register_exception<SizeError>(mod, "SizeError", base.ptr());
    py::register_exception<FormatError>(mod, "FormatError", base.ptr());
    py::register_exception<ConsistencyError>(mod, "ConsistencyError", base.ptr());

    py::class_<Scheme>(mod, "Scheme")
        .def_property_readonly("n", &Scheme::n)
        .def_property_readonly("u", &Scheme::u)
        .def_property_readonly("q", &Scheme::q)
        .def_property_readonly("cell_alphabet", &Scheme::cell_alphabet)
        .def_property_readonly("domain", [](const Scheme& s) { return std::string(to_string(s.domain())); })
        .def_property_readonly("probes", [](const Scheme& s) { return s.probes().sets(); })
        .def("encode", [](const Scheme& s, const std::string& x) { return s.encode(BitVector::parse(x)); })
        .def("answer", [](const Scheme& s, const std::string& x, std::size_t i) {
            return answer_query(s, BitVector::parse(x), i);
        }, py::arg("x"), py::arg("i"))
        .def("verify", [](const Scheme& s) {
            const auto v = verify_scheme(s, default_oracle(s));
            py::dict d;
            d["pass"] = v.pass;
            d["checked"] = v.checked;
            if (v.counterexample) {
                d["counterexample"] = py::make_tuple(v.counterexample->x.str(), v.counterexample->i);
            } else {
                d["counterexample"] = py::none();
            }
            return d;
        })
        .def("redundancy", [](const Scheme& s) { return redundancy(s); })
        .def("materialize", [](const Scheme& s) { return materialize(s); })
        .def("to_text", [](const Scheme& s) {
            std::ostringstream out;
            write_scheme(out, s);
            return out.str();
        })
        .def("__eq__", [](const Scheme& a, const Scheme& b) { return same_scheme(a, b); });

    mod.def("build_scheme", [](const std::string& variant, std::size_t n, std::uint32_t m,
                               std::size_t block, std::size_t superblock) {
        return build_reference(params(variant, n, m, block, superblock));
    }, py::arg("variant"), py::arg("n"), py::arg("cell_alphabet"), py::arg("block") = 0,
       py::arg("superblock") = 0);
    mod.def("read_scheme", [](const std::string& path) { return read_scheme_file(path); });
    mod.def("parse_scheme", [](const std::string& text) {
        std::istringstream in(text);
        return read_scheme(in);
    });
    mod.def("write_scheme", [](const std::string& path, const Scheme& s) { write_scheme_file(path, s); });
    mod.def("redundancy_bits", [](std::size_t u, std::uint32_t m, const py::int_& size) {
        return redundancy_bits(u, m, BigInt(std::string(py::str(size)), 10));
    });

    mod.def("separator", [](const std::vector<ProbeSet>& sets, double gap) {
        const auto r = find_separator(ProbeFamily(sets), gap);
        py::dict d;
        d["B"] = r.blocker;
        d["V"] = r.kept;
        d["w"] = r.w;
        d["k0"] = r.k0;
        d["stages_run"] = r.stages_run;
        return d;
    }, py::arg("probe_sets"), py::arg("gap"));
    mod.def("bracket_separator", [](const std::vector<ProbeSet>& sets, unsigned c, bool check) {
        const ProbeFamily fam(sets);
        const auto r = check ? find_separator_brackets(fam, c) : run_bracket_separator_stages(fam, c);
        py::dict d;
        d["B"] = r.blocker;
        d["V"] = r.kept;
        d["a"] = r.a;
        d["b"] = r.b;
        d["exponent_relation"] = r.exponent_relation;
        d["blocker_small"] = r.blocker_small;
        d["kept_large"] = r.kept_large;
        d["preconditions_hold"] = r.preconditions_hold;
        return d;
    }, py::arg("probe_sets"), py::arg("c"), py::arg("check") = true);

    mod.def("stretcher", [](const std::vector<std::uint64_t>& v, std::uint64_t n, double c) {
        const auto r = find_stretcher(v, n, c);
        py::dict d;
        d["V_prime"] = r.v_prime;
        d["window"] = r.window;
        d["guaranteed_size"] = r.guaranteed_size;
        return d;
    }, py::arg("indices"), py::arg("n"), py::arg("c"));

    mod.def("entropy", [](const std::vector<std::uint32_t>& alphabets, const py::dict& pmf) {
        return entropy(dist_from_dict(alphabets, pmf));
    }, py::arg("alphabets"), py::arg("pmf"));
    mod.def("tv_to_uniform", [](const std::vector<std::uint32_t>& alphabets, const py::dict& pmf) {
        return to_py(tv_to_uniform(dist_from_dict(alphabets, pmf)));
    }, py::arg("alphabets"), py::arg("pmf"));
    mod.def("good_blocks", [](const std::vector<std::string>& inputs, const std::vector<std::size_t>& sizes,
                              double eps) {
        std::vector<BitVector> xs;
        for (const auto& s : inputs) xs.push_back(BitVector::parse(s));
        const auto r = good_blocks(Distribution::uniform_bits(xs), sizes, eps);
        py::dict d;
        d["good"] = r.good;
        d["deficiency"] = r.deficiency;
        d["a"] = r.a;
        d["size_bound_satisfied"] = r.size_bound_satisfied;
        d["tv_clause_holds"] = r.tv_clause_holds;
        return d;
    }, py::arg("inputs"), py::arg("block_sizes"), py::arg("epsilon"));
    mod.def("good_cells", [](const std::vector<std::uint32_t>& alphabets, const py::dict& pmf,
                             std::size_t q, double eta) {
        const auto r = good_cells(dist_from_dict(alphabets, pmf), q, eta);
        py::dict d;
        d["good"] = r.good;
        d["verified"] = r.verified;
        d["a"] = r.a;
        return d;
    }, py::arg("alphabets"), py::arg("pmf"), py::arg("q"), py::arg("eta"));

    mod.def("entropy_sum_uniform", [](std::size_t n, std::size_t p, std::size_t i, std::size_t j,
                                      double c) {
        const auto w = entropy_sum_analysis(UniformBits{n}, p, i, j, c);
        py::dict d;
        d["t"] = w.threshold.t;
        d["upper_cutoff"] = w.upper_cutoff;
        d["P_upper"] = to_py(w.p_upper);
        d["P_lower"] = to_py(w.p_lower);
        d["P_joint"] = to_py(w.p_joint);
        d["holds"] = w.holds;
        return d;
    }, py::arg("n"), py::arg("p"), py::arg("i"), py::arg("j"), py::arg("c"));
    mod.def("binomial_tail", [](std::uint64_t trials, std::int64_t thr) {
        return to_py(binomial_tail(trials, thr));
    });

    mod.def("catalan_count", [](std::size_t n) { return to_py(catalan_count(n)); });
    mod.def("enumerate_bal", [](std::size_t n) {
        std::vector<std::string> out;
        for (const auto& x : enumerate_bal(n)) out.push_back(to_brackets(x));
        return out;
    });
    mod.def("match", [](const std::string& x, std::size_t i) { return match_index(parse_brackets(x), i); });
    mod.def("unmatched_open_prob", [](std::size_t d) { return to_py(unmatched_open_prob(d)); });
    mod.def("unmatched_close_prob", [](std::size_t d) { return to_py(unmatched_close_prob(d)); });

    mod.def("run_prefix_pipeline", [](const Scheme& s, double c) {
        return pipeline_dict(run_prefix_pipeline(s, c));
    }, py::arg("scheme"), py::arg("c"));
    mod.def("run_bracket_pipeline", [](const Scheme& s, unsigned c) {
        return pipeline_dict(run_bracket_pipeline(s, c));
    }, py::arg("scheme"), py::arg("c"));

    mod.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
