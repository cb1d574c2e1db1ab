#pragma once

namespace tdlc::fixtures::detail {

/* Table generated at build time from data/fixtures/*.json. */
struct EmbeddedFile {
    const char* name;
    const char* body;
};

const EmbeddedFile* embedded_files();
int embedded_file_count();

}  // namespace tdlc::fixtures::detail
