// Text file formats for states, witnesses, and identical-particle
// states: one `key: value` entry per field with JSON-style values.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "entkit/fermionic.hpp"
#include "entkit/states.hpp"
#include "entkit/witnesses.hpp"

namespace entkit {

void save_density(std::ostream& out, const DensityMatrix& rho);
void save_density_file(const std::string& path, const DensityMatrix& rho);
DensityMatrix load_density(std::istream& in);
DensityMatrix load_density_file(const std::string& path);

void save_witness(std::ostream& out, const Witness& w,
                  const std::optional<PseudoMixture>& mixture = std::nullopt);
struct LoadedWitness {
    Witness witness;
    std::optional<PseudoMixture> mixture;
};
LoadedWitness load_witness(std::istream& in);

enum class ParticleKind { Fermion, Boson };

void save_identical(std::ostream& out, ParticleKind kind, const ComplexMatrix& coefficients);
void save_identical_file(const std::string& path, ParticleKind kind,
                         const ComplexMatrix& coefficients);
struct LoadedIdentical {
    ParticleKind kind = ParticleKind::Fermion;
    std::size_t n_modes = 0;
    ComplexMatrix coefficients;
};
LoadedIdentical load_identical(std::istream& in);
LoadedIdentical load_identical_file(const std::string& path);

// FNV-1a content digest used to key reports to their inputs.
std::string content_digest(const std::string& bytes);

}  // namespace entkit
