//! Slope, flow routing, water bodies and river networks.

pub mod flow;
pub mod rivers;
pub mod slope;
pub mod water;

pub use flow::{
    d8_directions, fill_sinks, fill_sinks_with, flow_accumulation, flow_directions, Direction, FlowCell, FlowGrid,
    DEFAULT_FILL_EPSILON,
};
pub use rivers::{extract_rivers, name_rivers, path_length_km, step_length_m, RiverSegment};
pub use slope::{horn_gradient, slope_map, SlopeGrid};
pub use water::{
    extract_water_bodies, water_fraction_pct, water_inventory, water_mask, WaterBody, WaterBodyKind, WaterInventory,
    WaterParams,
};
