//! Counts of cyclically reduced words and conjugacy classes by length and
//! abelianization, from three independent engines.

pub mod classes;
pub mod dp;
pub mod enumerate;
pub mod fourier;
pub mod io;
pub mod table;

pub use classes::{
    burnside_class_table, orbit_class_row, orbit_class_table, restricted_count, ApproxClassCounts, ClassCountTable,
    ClassMethod,
};
pub use dp::{dp_count_by_homology, dp_table, ExactCount};
pub use enumerate::{
    cyclic_word_total, enumerate_cyclically_reduced, oracle_count_by_homology, oracle_table, CyclicWords, Guard,
};
pub use fourier::{fourier_count_by_homology, FourierSlice, DEFAULT_FOURIER_TOLERANCE};
pub use table::{cumulative_counts, CountTable, DenseRow, Stratified};
pub use io::{
    class_slice_to_json, slice_from_json, slice_to_csv, slice_to_json, table_to_csv, table_to_json_lines,
    ClassSliceJson, SliceJson, CLASS_SCHEMA, SLICE_SCHEMA,
};
