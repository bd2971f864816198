/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_raster_free: (a: number, b: number) => void;
export const __wbg_voxelview_free: (a: number, b: number) => void;
export const lif_trace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const raster_n: (a: number) => number;
export const raster_parts: (a: number) => [number, number];
export const raster_steps: (a: number) => [number, number];
export const raster_vertices: (a: number) => [number, number];
export const spike_raster: (a: number, b: number, c: number, d: bigint, e: bigint) => [number, number, number];
export const voxel_view: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
export const voxelview_balance: (a: number) => number;
export const voxelview_edge_cut: (a: number) => number;
export const voxelview_edges: (a: number) => [number, number];
export const voxelview_parts: (a: number) => [number, number];
export const voxelview_synapses: (a: number) => number;
export const voxelview_xyz: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
