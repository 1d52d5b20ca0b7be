import { fetchTransport } from "./api.js";
import { Studio } from "./studio.js";

const studio = new Studio(fetchTransport(""));
document.body.appendChild(studio.element);
void studio.start();
