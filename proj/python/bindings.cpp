#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "robulink/analysis/correlation.hpp"
#include "robulink/corrupt/engine.hpp"
#include "robulink/imgcore/metrics.hpp"
#include "robulink/robustness/robustness.hpp"
#include "robulink/score/text.hpp"

namespace py = pybind11;
using namespace robulink;

namespace {

using Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

ImageBuffer from_array(const Array& a) {
    if (a.ndim() != 3 || a.shape(2) != 3) throw std::invalid_argument("expected an (H, W, 3) uint8 array");
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    std::vector<std::uint8_t> data(a.data(), a.data() + a.size());
    return ImageBuffer(w, h, std::move(data));
}

Array to_array(const ImageBuffer& img) {
    Array out({img.height(), img.width(), 3});
    std::memcpy(out.mutable_data(), img.data().data(), img.data().size());
    return out;
}

Strength strength_of(const std::string& s) {
    const auto v = parse_strength(s);
    if (!v) throw std::invalid_argument("unknown strength '" + s + "'");
    return *v;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Image corruption and robustness metrics";
    m.attr("__version__") = ROBULINK_VERSION;

    m.def("dimensions", [] {
        py::list out;
        for (const auto& d : all_dimensions()) {
            py::dict e;
            e["id"] = d.id;
            e["slug"] = std::string(d.slug);
            e["title"] = std::string(d.title);
            e["step"] = std::string(to_string(d.step));
            e["group"] = std::string(to_string(d.group));
            e["synthetic_wild"] = d.synthetic_wild;
            out.append(e);
        }
        return out;
    });

    m.def(
        "corrupt",
        [](const Array& image, int dimension, const std::string& strength, std::uint64_t seed) {
            const CorruptionSpec spec{dimension, strength_of(strength), seed};
            const ImageBuffer in = from_array(image);
            ImageBuffer out;
            {
                py::gil_scoped_release release;
                out = apply(spec, in);
            }
            return to_array(out);
        },
        py::arg("image"), py::arg("dimension"), py::arg("strength"), py::arg("seed") = 0);

    m.def("label", [](int d, const std::string& s, std::uint64_t seed) { return corruption_label({d, strength_of(s), seed}); },
          py::arg("dimension"), py::arg("strength"), py::arg("seed") = 0);

    m.def("psnr", [](const Array& a, const Array& b) { return psnr(from_array(a), from_array(b)); });

    m.def("srocc", [](const std::vector<double>& x, const std::vector<double>& y) { return srocc(x, y); });

    m.def("token_f1", [](const std::string& a, const std::string& b) { return token_f1(a, b); });

    m.def(
        "bootstrap_ci",
        [](const std::vector<double>& v, double level, int resamples, std::uint64_t seed) {
            return bootstrap_ci(v, level, resamples, seed);
        },
        py::arg("values"), py::arg("level") = 0.90, py::arg("resamples") = 1000, py::arg("seed") = 0);

    m.def("relative", [](double ref_vs_gt, double ref_vs_dist) {
        EvalRecord r;
        r.ref_vs_gt = ScoreValue{ref_vs_gt};
        r.ref_vs_dist = ScoreValue{ref_vs_dist};
        return *relative(r);
    });
}
