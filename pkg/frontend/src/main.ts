import { mount } from "./app.js";

const baseUrl = new URLSearchParams(window.location.search).get("service") ?? "";
const app = mount(document, baseUrl);
void app.ensureSession().then(() => app.loadHistory());
