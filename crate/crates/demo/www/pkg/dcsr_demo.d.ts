/* tslint:disable */
/* eslint-disable */

/**
 * Spikes of a four-population network, as parallel arrays.
 */
export class Raster {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly n: number;
    /**
     * Part of each vertex after voxel partitioning.
     */
    readonly parts: Uint32Array;
    readonly steps: Uint32Array;
    readonly vertices: Uint32Array;
}

/**
 * Vertex positions and part labels of a voxel-partitioned network.
 */
export class VoxelView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly balance: number;
    readonly edge_cut: number;
    /**
     * Flat `source, target` pairs.
     */
    readonly edges: Uint32Array;
    readonly parts: Uint32Array;
    readonly synapses: number;
    /**
     * Flat `x, y, z` triples.
     */
    readonly xyz: Float64Array;
}

/**
 * Membrane potential of one neuron under constant drive, sampled after
 * each step. Spiking steps read `v_th` so the trace shows the crossing.
 */
export function lif_trace(drive: number, tau: number, v_th: number, refrac: number, dt: number, steps: number): Float64Array;

/**
 * Runs a populations network split into `k` voxel parts. Vertex ids in the
 * result are the generator's, so the raster is the same for every `k`.
 */
export function spike_raster(n: number, k: number, bias: number, steps: bigint, seed: bigint): Raster;

/**
 * Generates a spatial network and splits it into `k` parts on a
 * `grid x grid x grid` voxel grid.
 */
export function voxel_view(n: number, k: number, grid: number, sigma: number, seed: bigint): VoxelView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_raster_free: (a: number, b: number) => void;
    readonly __wbg_voxelview_free: (a: number, b: number) => void;
    readonly lif_trace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly raster_n: (a: number) => number;
    readonly raster_parts: (a: number) => [number, number];
    readonly raster_steps: (a: number) => [number, number];
    readonly raster_vertices: (a: number) => [number, number];
    readonly spike_raster: (a: number, b: number, c: number, d: bigint, e: bigint) => [number, number, number];
    readonly voxel_view: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
    readonly voxelview_balance: (a: number) => number;
    readonly voxelview_edge_cut: (a: number) => number;
    readonly voxelview_edges: (a: number) => [number, number];
    readonly voxelview_parts: (a: number) => [number, number];
    readonly voxelview_synapses: (a: number) => number;
    readonly voxelview_xyz: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
