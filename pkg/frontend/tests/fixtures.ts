import type { HistoryEntry, QueryResponse } from "../src/api.js";

export const EVACUATION_QUERY =
  "Which area has the largest evacuation rate during Hurricane Harvey? " +
  "I want to know it in zip code level";

export const FLOOD_PREDICTION_QUERY =
  "I want to predict the flood inundation depth of the road network in Houston " +
  "assuming there will be a hurricane similar to Harvey";

export const RANKING_SQL =
  "SELECT harvey_evacuation_data.zip_code, MAX(harvey_evacuation_data.evacuation_rate) " +
  "FROM harvey_evacuation_data GROUP BY harvey_evacuation_data.zip_code " +
  "ORDER BY MAX(harvey_evacuation_data.evacuation_rate) DESC";

export const structuredResponse: QueryResponse = {
  answer_text:
    "Zip code 77061 shows the highest evacuation rate at 57.14%, followed by " +
    "77025 and 77005 at 55.56%.",
  pathway: "structured",
  sources: [`${RANKING_SQL} (3 rows)`],
  degraded: false,
  rewritten_query: EVACUATION_QUERY,
  query_type: "quantitative",
  sql: RANKING_SQL,
  trace_id: "trace-62",
};

export const webResponse: QueryResponse = {
  answer_text:
    "Flood inundation depth can be estimated by combining remote sensing, " +
    "hydrological simulation and inundation mapping; uncertainty remains for " +
    "events unlike past storms.",
  pathway: "web",
  sources: [
    "https://example.org/harvey-sentinel",
    "https://example.org/harvey-mapping",
    "https://example.org/road-simulation",
  ],
  degraded: false,
  rewritten_query: FLOOD_PREDICTION_QUERY,
  query_type: "other",
  sql: null,
  trace_id: "trace-63",
};

export const followUpResponse: QueryResponse = {
  answer_text: "Evacuation rates in Houston peaked at 57.14% during Hurricane Harvey.",
  pathway: "document",
  sources: ["fema-evac-plan"],
  degraded: false,
  rewritten_query:
    "What was the evacuation rate in Houston during Hurricane Harvey?",
  query_type: "contextual",
  sql: null,
  trace_id: "trace-64",
};

export const historyEntries: HistoryEntry[] = [
  {
    user_query: "What is storm surge?",
    answer: "Storm surge is an abnormal rise of water generated by a storm.",
    disaster_tags: ["storm surge"],
    location_tags: [],
    timestamp: 1.0,
  },
  {
    user_query: EVACUATION_QUERY,
    answer: "Zip code 77061 shows the highest evacuation rate at 57.14%.",
    disaster_tags: ["hurricane harvey"],
    location_tags: [],
    timestamp: 2.0,
  },
];

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
