#include "itt/error.hpp"

namespace itt {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingCell: return "MissingCell";
    case Errc::MissingAtoms: return "MissingAtoms";
    case Errc::BadSymop: return "BadSymop";
    case Errc::BadNumber: return "BadNumber";
    case Errc::MissingLattice: return "MissingLattice";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::TooManyAtoms: return "TooManyAtoms";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::InsufficientElements: return "InsufficientElements";
    case Errc::TooManyPoints: return "TooManyPoints";
    case Errc::InvalidFiltration: return "InvalidFiltration";
    case Errc::TooLarge: return "TooLarge";
    case Errc::EmptyCluster: return "EmptyCluster";
    case Errc::SamePair: return "SamePair";
    case Errc::IoError: return "IoError";
    case Errc::BadManifest: return "BadManifest";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace itt
