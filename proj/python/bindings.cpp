#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "subsync/balls.hpp"
#include "subsync/docex.hpp"
#include "subsync/error.hpp"
#include "subsync/harness.hpp"
#include "subsync/wire.hpp"

namespace py = pybind11;
using namespace subsync;

namespace {

// Big integers cross the boundary as hex text.
py::int_ to_py(const BigInt& v) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(v.get_str(16).c_str(), nullptr, 16));
}

BigInt from_py(const py::int_& v) {
    if (PyObject_RichCompareBool(v.ptr(), py::int_(0).ptr(), Py_LT) == 1)
        throw py::value_error("labels must be non-negative");
    return BigInt(py::str(py::module_::import("builtins").attr("format")(v, "x")).cast<std::string>(), 16);
}

std::vector<std::string> to_list(const StringSet& set) {
    std::vector<std::string> out;
    for (const BitString& s : set) out.push_back(s.str());
    return out;
}

py::bytes to_bytes(const std::vector<std::uint8_t>& b) {
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

LabelingPtr labeling(const std::string& spec, std::uint64_t seed) { return LabelingSpec::parse(spec).make(seed); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Substring-edit document exchange";

    static py::exception<Error> error(m, "SubsyncError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error.ptr())(e.what());
            exc.attr("code") = std::string(errc_name(e.code()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    m.def(
        "apply_edit",
        [](const std::string& x, std::size_t position, const std::string& u, const std::string& v) {
            return apply_substring_edit(BitString::parse(x), {position, BitString::parse(u), BitString::parse(v)}).str();
        },
        py::arg("x"), py::arg("position"), py::arg("deleted"), py::arg("inserted"),
        "Replace `deleted` at 1-based `position` with `inserted`.");

    m.def(
        "edit_ball", [](const std::string& x, unsigned t, unsigned k) { return to_list(edit_ball(BitString::parse(x), t, k)); },
        py::arg("x"), py::arg("t"), py::arg("k"));
    m.def(
        "confusion_ball",
        [](const std::string& x, unsigned t, unsigned k) { return to_list(confusion_ball(BitString::parse(x), t, k)); },
        py::arg("x"), py::arg("t"), py::arg("k"));
    m.def(
        "restricted_confusion_ball",
        [](const std::string& x, unsigned t, unsigned k, const std::string& pattern, std::size_t window) {
            return to_list(restricted_confusion_ball(BitString::parse(x), t, k, BitString::parse(pattern), window));
        },
        py::arg("x"), py::arg("t"), py::arg("k"), py::arg("pattern") = "01", py::arg("window"));
    m.def(
        "ball_size_upper_bound", [](std::size_t n, unsigned t, unsigned k) { return to_py(ball_size_upper_bound(n, t, k)); },
        py::arg("n"), py::arg("t"), py::arg("k"));
    m.def(
        "is_dense",
        [](const std::string& x, const std::string& pattern, std::size_t window) {
            return is_pattern_dense(BitString::parse(x), BitString::parse(pattern), window);
        },
        py::arg("x"), py::arg("pattern") = "01", py::arg("window"));

    m.def(
        "label",
        [](const std::string& x, const std::string& spec, std::uint64_t seed) {
            return to_py(labeling(spec, seed)->label(BitString::parse(x)));
        },
        py::arg("x"), py::arg("labeling") = "identity", py::arg("seed") = 0);
    m.def(
        "find_separating_modulus",
        [](const py::int_& lx, const std::vector<py::int_>& others) {
            std::vector<BigInt> values;
            values.reserve(others.size());
            for (const py::int_& o : others) values.push_back(from_py(o));
            return to_py(find_separating_modulus(from_py(lx), values).value());
        },
        py::arg("label_x"), py::arg("others"));

    m.def(
        "encode_worst",
        [](const std::string& x, unsigned t, unsigned k, const std::string& spec, std::uint64_t seed) {
            const BitString bx = BitString::parse(x);
            return to_bytes(wire::serialize(encode_worst(bx, {bx.size(), t, k}, *labeling(spec, seed))));
        },
        py::arg("x"), py::arg("t"), py::arg("k"), py::arg("labeling") = "identity", py::arg("seed") = 0,
        "Worst-case encoding of x in the binary wire format.");
    m.def(
        "encode_average",
        [](const std::string& x, unsigned t, unsigned k, const std::string& pattern, std::size_t window,
           const std::string& spec, std::uint64_t seed) {
            const BitString bx = BitString::parse(x);
            const DensityConfig density{BitString::parse(pattern), window};
            return to_bytes(wire::serialize(encode_average(bx, {bx.size(), t, k}, *labeling(spec, seed), density)));
        },
        py::arg("x"), py::arg("t"), py::arg("k"), py::arg("pattern") = "01", py::arg("window"),
        py::arg("labeling") = "identity", py::arg("seed") = 0, "Average-case encoding of x in the binary wire format.");
    m.def(
        "decode",
        [](const std::string& y, const py::bytes& message, const std::string& spec, std::uint64_t seed) {
            const LabelingPtr f = labeling(spec, seed);
            const BitString by = BitString::parse(y);
            const wire::Message msg = wire::deserialize(from_bytes(message));
            if (const auto* w = std::get_if<WorstCaseEncoding>(&msg)) return decode_worst(by, *w, *f).str();
            return decode_average(by, std::get<AverageCaseEncoding>(msg), *f).str();
        },
        py::arg("y"), py::arg("message"), py::arg("labeling") = "identity", py::arg("seed") = 0,
        "Recover x from its corrupted copy y and a serialized encoding.");
    m.def(
        "encoding_info",
        [](const py::bytes& message) {
            const wire::Message msg = wire::deserialize(from_bytes(message));
            py::dict info;
            const auto fill = [&](const EditParams& p, const char* scheme, std::size_t bits, const BigInt& modulus) {
                info["scheme"] = scheme;
                info["n"] = p.n;
                info["t"] = p.t;
                info["k"] = p.k;
                info["bits"] = bits;
                info["modulus"] = to_py(modulus);
            };
            if (const auto* w = std::get_if<WorstCaseEncoding>(&msg)) {
                fill(w->params, "worst", encoding_bit_length(*w), w->modulus.value());
            } else {
                const auto& a = std::get<AverageCaseEncoding>(msg);
                if (const auto* d = std::get_if<DenseEncoding>(&a)) {
                    fill(d->params, "dense", encoding_bit_length(a), d->modulus.value());
                    info["hint_modulus"] = to_py(d->hint.modulus.value());
                } else {
                    const auto& inner = std::get<NonDenseEncoding>(a).inner;
                    fill(inner.params, "non-dense", encoding_bit_length(a), inner.modulus.value());
                }
            }
            return info;
        },
        py::arg("message"));
}
