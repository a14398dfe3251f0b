#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "floquet_sg/contour.hpp"

namespace floquet_sg {

/// Fixed float formatting: 17 significant digits, enough to round-trip a
/// double, identical across runs.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Minimal insertion-ordered JSON document with deterministic output.
class Json {
 public:
  Json() : value_(nullptr) {}
  Json(bool b) : value_(b) {}
  Json(int v) : value_(static_cast<std::int64_t>(v)) {}
  Json(std::int64_t v) : value_(v) {}
  Json(double v) : value_(v) {}
  Json(const char* s) : value_(std::string(s)) {}
  Json(std::string s) : value_(std::move(s)) {}

  static Json object() {
    Json j;
    j.value_ = Members{};
    return j;
  }
  static Json array() {
    Json j;
    j.value_ = Elements{};
    return j;
  }

  Json& set(const std::string& key, Json v) {
    std::get<Members>(value_).emplace_back(key, std::move(v));
    return *this;
  }
  Json& push(Json v) {
    std::get<Elements>(value_).push_back(std::move(v));
    return *this;
  }

  std::string dump(int indent = 0) const {
    std::string out;
    write(out, indent, 0);
    return out;
  }

 private:
  struct Members;
  struct Elements;
  using Value = std::variant<std::nullptr_t, bool, std::int64_t, double,
                             std::string, Elements, Members>;
  struct Members : std::vector<std::pair<std::string, Json>> {};
  struct Elements : std::vector<Json> {};

  static void escape(std::string& out, const std::string& s) {
    out += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
            out += buf;
          } else {
            out += ch;
          }
      }
    }
    out += '"';
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad = indent ? std::string(indent * (depth + 1), ' ') : "";
    const std::string close_pad = indent ? std::string(indent * depth, ' ') : "";
    const char* nl = indent ? "\n" : "";
    if (std::holds_alternative<std::nullptr_t>(value_)) {
      out += "null";
    } else if (auto b = std::get_if<bool>(&value_)) {
      out += *b ? "true" : "false";
    } else if (auto i = std::get_if<std::int64_t>(&value_)) {
      out += std::to_string(*i);
    } else if (auto d = std::get_if<double>(&value_)) {
      out += std::isfinite(*d) ? fmt17(*d) : "null";
    } else if (auto s = std::get_if<std::string>(&value_)) {
      escape(out, *s);
    } else if (auto a = std::get_if<Elements>(&value_)) {
      if (a->empty()) {
        out += "[]";
        return;
      }
      out += '[';
      out += nl;
      for (size_t i = 0; i < a->size(); ++i) {
        out += pad;
        (*a)[i].write(out, indent, depth + 1);
        if (i + 1 < a->size()) out += ',';
        out += nl;
      }
      out += close_pad;
      out += ']';
    } else if (auto m = std::get_if<Members>(&value_)) {
      if (m->empty()) {
        out += "{}";
        return;
      }
      out += '{';
      out += nl;
      for (size_t i = 0; i < m->size(); ++i) {
        out += pad;
        escape(out, (*m)[i].first);
        out += indent ? ": " : ":";
        (*m)[i].second.write(out, indent, depth + 1);
        if (i + 1 < m->size()) out += ',';
        out += nl;
      }
      out += close_pad;
      out += '}';
    }
  }

  Value value_;
};

inline Json json_complex(cplx v) {
  return Json::object().set("re", v.real()).set("im", v.imag());
}

// ------------------------------------------------------------------ CSV

inline void write_grid_csv(std::ostream& os, const SpectrumContour& sc) {
  os << "re,im,gp\n";
  const auto& g = sc.grid;
  const double dx = (g.re_max - g.re_min) / (g.nx - 1);
  const double dy = (g.im_max - g.im_min) / (g.ny - 1);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      os << fmt17(g.re_min + ix * dx) << ',' << fmt17(g.im_min + iy * dy)
         << ',' << fmt17(sc.gp[static_cast<size_t>(iy) * g.nx + ix]) << '\n';
}

inline void write_contours_csv(std::ostream& os, const SpectrumContour& sc) {
  os << "polyline_id,re,im\n";
  for (size_t i = 0; i < sc.polylines.size(); ++i)
    for (const cplx& p : sc.polylines[i])
      os << i << ',' << fmt17(p.real()) << ',' << fmt17(p.imag()) << '\n';
}

inline void write_hill_csv(std::ostream& os, const std::vector<double>& mu,
                           const std::vector<double>& delta) {
  os << "mu,delta_q\n";
  for (size_t i = 0; i < mu.size(); ++i)
    os << fmt17(mu[i]) << ',' << fmt17(delta[i]) << '\n';
}

// ------------------------------------------------------------------ SVG

namespace detail {

// tick spacing of the form {1, 2, 5} * 10^k giving 4-8 ticks over the range
inline double nice_step(double range) {
  const double raw = range / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm < 1.5) return mag;
  if (norm < 3.5) return 2.0 * mag;
  if (norm < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

inline std::string fmt_tick(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

/// Self-contained SVG plot of the contour polylines with axes and ticks.
inline void write_contour_svg(std::ostream& os, const SpectrumContour& sc,
                              const std::string& title) {
  const int width = 720, height = 640;
  const int ml = 70, mr = 25, mt = 45, mb = 55;
  const auto& g = sc.grid;
  auto sx = [&](double re) {
    return ml + (re - g.re_min) / (g.re_max - g.re_min) * (width - ml - mr);
  };
  auto sy = [&](double im) {
    return height - mb -
           (im - g.im_min) / (g.im_max - g.im_min) * (height - mt - mb);
  };
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\">\n"
     << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">"
     << title << "</text>\n";

  // frame
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\""
     << width - ml - mr << "\" height=\"" << height - mt - mb
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const double xstep = detail::nice_step(g.re_max - g.re_min);
  for (double x = std::ceil(g.re_min / xstep) * xstep; x <= g.re_max + 1e-12;
       x += xstep) {
    os << "<line x1=\"" << sx(x) << "\" y1=\"" << height - mb << "\" x2=\""
       << sx(x) << "\" y2=\"" << height - mb + 5
       << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << sx(x) << "\" y=\"" << height - mb + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << detail::fmt_tick(x) << "</text>\n";
  }
  const double ystep = detail::nice_step(g.im_max - g.im_min);
  for (double y = std::ceil(g.im_min / ystep) * ystep; y <= g.im_max + 1e-12;
       y += ystep) {
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(y) << "\" x2=\"" << ml
       << "\" y2=\"" << sy(y) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << ml - 9 << "\" y=\"" << sy(y) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << detail::fmt_tick(y) << "</text>\n";
  }
  os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">Re &#955;</text>\n"
     << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\" transform=\"rotate(-90 18 "
     << (mt + height - mb) / 2 << ")\">Im &#955;</text>\n";

  // zero axes when inside the box
  if (g.re_min < 0 && g.re_max > 0)
    os << "<line x1=\"" << sx(0) << "\" y1=\"" << mt << "\" x2=\"" << sx(0)
       << "\" y2=\"" << height - mb
       << "\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n";
  if (g.im_min < 0 && g.im_max > 0)
    os << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\""
       << width - mr << "\" y2=\"" << sy(0)
       << "\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n";

  for (const auto& poly : sc.polylines) {
    if (poly.size() < 2) continue;
    os << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.4\" "
          "points=\"";
    for (const cplx& p : poly) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(p.real()),
                    sy(p.imag()));
      os << buf;
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace floquet_sg
