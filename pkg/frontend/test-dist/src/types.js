// Payload shapes of the pipeline service HTTP endpoints.
export {};
