#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracspec/eigensolver.hpp"

namespace fracspec::io {

enum class Format { Csv, Json };

// "csv" or "json"; anything else is a ConfigError.
Format parse_format(const std::string& name);

// %.17g, with nan / inf / -inf spelled out.
std::string format_double(double v);

// index,re_lambda,im_lambda,residual,is_real,region,cone_margin
void write_spectrum(std::ostream& os, const Spectrum& spectrum, const SpectrumReport& report, Format format);

// Counts, cone margin, principal pair and residual statistics as JSON.
void write_report(std::ostream& os, const Spectrum& spectrum, const SpectrumReport& report);

// Nodal trace of eigenfunction `index` (1-based), endpoints included:
// x,re_u,im_u,abs_u
void write_eigenfunction(std::ostream& os, const Spectrum& spectrum, std::size_t index, Format format);

// x followed by re_u<j>,im_u<j> for j = 1..count.
void write_vectors(std::ostream& os, const Spectrum& spectrum, std::size_t count);

// path with "_j<index>" inserted before the extension.
std::string indexed_path(const std::string& path, std::size_t index);

// path with `suffix` inserted before the extension.
std::string sibling_path(const std::string& path, const std::string& suffix, const std::string& extension);

// Opens `path` for writing or throws IoError.
void write_file(const std::string& path, const std::string& contents);

}  // namespace fracspec::io
